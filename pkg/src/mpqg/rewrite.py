"""Noncommutative word rewriting with critical-pair completion.

Rules rewrite words over an integer alphabet into combinations of
strictly smaller words in the degree-lexicographic order (longer is
bigger; ties compare letters left to right).  The defining relations are
homogeneous per multidegree, so every rule replaces a word by words of
the same length and all reductions terminate.  Completion resolves
overlap ambiguities up to a length bound and fails loudly when the
budget runs out or a mixed-unit leading coefficient appears.
"""

from .series import TruncLaurent, ts_div_h


class CompletionIncomplete(ArithmeticError):
    """Completion could not finish within its budget."""


def word_key(word):
    return (len(word), word)


class Rule:
    __slots__ = ("lhs", "rhs")

    def __init__(self, lhs, rhs):
        self.lhs = tuple(lhs)
        for w in rhs:
            if word_key(w) >= word_key(self.lhs):
                raise ValueError("rule is not decreasing")
        self.rhs = dict(rhs)

    def __repr__(self):
        return "Rule(%r -> %d terms)" % (self.lhs, len(self.rhs))


def _find_match(word, rules, leftmost=True):
    positions = range(len(word)) if leftmost else range(len(word) - 1, -1, -1)
    for pos in positions:
        for ridx, rule in enumerate(rules):
            l = len(rule.lhs)
            if word[pos:pos + l] == rule.lhs:
                return pos, ridx
    return None


class RewriteSystem:
    """An oriented rule set with memoized exhaustive reduction."""

    def __init__(self, rules):
        self.rules = list(rules)
        self._memo = {}

    def reduce(self, word):
        """Normal form of a single word: dict {word: TruncLaurent-or-1}.

        Coefficient 1 (the integer) marks an exact unit to keep pure
        bookkeeping cheap; callers multiply through.
        """
        word = tuple(word)
        hit = self._memo.get(word)
        if hit is not None:
            return hit
        m = _find_match(word, self.rules)
        if m is None:
            out = {word: 1}
        else:
            pos, ridx = m
            rule = self.rules[ridx]
            out = {}
            for w, c in rule.rhs.items():
                sub = word[:pos] + w + word[pos + len(rule.lhs):]
                for w2, c2 in self.reduce(sub).items():
                    prev = out.get(w2)
                    term = c * c2
                    if prev is None:
                        out[w2] = term
                    else:
                        s = prev + term
                        if isinstance(s, TruncLaurent) and s.is_zero():
                            del out[w2]
                        else:
                            out[w2] = s
        self._memo[word] = out
        return out

    def reduce_free(self, word, leftmost=True, rule_perm=None):
        """Unmemoized reduction with a pluggable strategy, for confluence
        experiments: position scan direction and rule ordering vary."""
        rules = self.rules if rule_perm is None else \
            [self.rules[i] for i in rule_perm]
        out = {}
        stack = [(tuple(word), 1)]
        while stack:
            w, c = stack.pop()
            m = _find_match(w, rules, leftmost)
            if m is None:
                prev = out.get(w)
                s = c if prev is None else prev + c
                if isinstance(s, TruncLaurent) and s.is_zero():
                    out.pop(w, None)
                else:
                    out[w] = s
                continue
            pos, ridx = m
            rule = rules[ridx]
            for rw, rc in rule.rhs.items():
                stack.append((w[:pos] + rw + w[pos + len(rule.lhs):], c * rc))
        return {w: c for w, c in out.items()
                if not (isinstance(c, TruncLaurent) and c.is_zero())}


def _poly_reduce(system, poly):
    out = {}
    for w, c in poly.items():
        for w2, c2 in system.reduce(w).items():
            term = c * c2
            prev = out.get(w2)
            s = term if prev is None else prev + term
            if isinstance(s, TruncLaurent) and s.is_zero():
                out.pop(w2, None)
            else:
                out[w2] = s
    return {w: c for w, c in out.items()
            if not (isinstance(c, TruncLaurent) and c.is_zero())}


def _as_series(c, order):
    if isinstance(c, TruncLaurent):
        return c
    return TruncLaurent.const(c, order)


def complete(rules, max_len, order, max_pairs=2000):
    """Resolve all overlap ambiguities of length <= max_len.

    Returns the completed RewriteSystem.  New rules come from reducing
    the two sides of each overlap word; a nonzero difference is oriented
    at its largest word after pulling out any common hbar power (the
    quotient algebra is torsion-free, so dividing a relation by hbar is
    legitimate).
    """
    system = RewriteSystem(rules)
    pending = [(i, j) for i in range(len(system.rules))
               for j in range(len(system.rules))]
    examined = 0
    while pending:
        i, j = pending.pop(0)
        r1, r2 = system.rules[i], system.rules[j]
        l1, l2 = r1.lhs, r2.lhs
        overlaps = []          # (ambiguity word, position of l2 in it)
        # proper overlap: a suffix of l1 is a prefix of l2
        for k in range(1, min(len(l1), len(l2))):
            if l1[-k:] == l2[:k]:
                overlaps.append((l1 + l2[k:], len(l1) - k))
        # containment: l2 occurs inside l1
        for pos in range(len(l1) - len(l2) + 1):
            if (i, pos) != (j, 0) and l1[pos:pos + len(l2)] == l2:
                overlaps.append((l1, pos))
        for word, pos2 in overlaps:
            if len(word) > max_len:
                continue
            examined += 1
            if examined > max_pairs:
                raise CompletionIncomplete(
                    "critical-pair budget exhausted at %r" % (word,))
            a = {}
            for w, c in r1.rhs.items():
                key = w + word[len(l1):]
                prev = a.get(key)
                a[key] = c if prev is None else prev + c
            b = {}
            for w, c in r2.rhs.items():
                key = word[:pos2] + w + word[pos2 + len(l2):]
                prev = b.get(key)
                b[key] = c if prev is None else prev + c
            ra = _poly_reduce(system, a)
            rb = _poly_reduce(system, b)
            diff = dict(ra)
            for w, c in rb.items():
                prev = diff.get(w)
                s = -c if prev is None else prev - c
                if isinstance(s, TruncLaurent) and s.is_zero():
                    diff.pop(w, None)
                elif isinstance(s, int) and s == 0:
                    diff.pop(w, None)
                else:
                    diff[w] = s
            diff = {w: _as_series(c, order) for w, c in diff.items()}
            diff = {w: c for w, c in diff.items() if not c.is_zero()}
            if not diff:
                continue
            # pull out a common hbar power (torsion-freeness)
            vmin = min(c.valuation() for c in diff.values())
            if vmin > 0:
                diff = {w: ts_div_h(c, vmin) for w, c in diff.items()}
            lead = max(diff, key=word_key)
            lc = diff[lead]
            if not lc.is_unit():
                raise CompletionIncomplete(
                    "mixed-unit leading coefficient on %r" % (lead,))
            inv = lc.inverse()
            rhs = {w: -(c * inv) for w, c in diff.items() if w != lead}
            new_idx = len(system.rules)
            system.rules.append(Rule(lead, rhs))
            system._memo.clear()
            pending.extend((new_idx, k) for k in range(new_idx + 1))
            pending.extend((k, new_idx) for k in range(new_idx))
    return system
