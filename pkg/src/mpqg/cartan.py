"""Cartan data, multiparameter matrices, realizations, and their twist
and 2-cocycle deformation calculi.

A realization packages a free module h of rank t (with the standard
coordinate basis H_1..H_t), coroot vectors T_i^+/T_i^- in h and root
covectors alpha_j in h*, subject to alpha_j(T_i^+) = p_ij and
alpha_j(T_i^-) = p_ji, with the averages S_i = (T_i^+ + T_i^-)/2
independent mod hbar.  Flags straight/small/split/minimal are certified
by rank computations mod hbar.
"""

import itertools
from fractions import Fraction

from .series import TruncLaurent, EXACT_ORDER
from . import linalg as la


class CartanError(ValueError):
    pass


class NotSymmetrizable(CartanError):
    pass


class NotCartanType(CartanError):
    pass


class RankTooSmall(CartanError):
    pass


class SmallObstruction(CartanError):
    pass


class NotAntisymmetric(CartanError):
    pass


class NotSplitMinimal(CartanError):
    pass


class AltSViolated(CartanError):
    pass


class SymmetricPartMismatch(CartanError):
    pass


def _gcd_list(xs):
    g = 0
    for x in xs:
        a, b = abs(x), g
        while b:
            a, b = b, a % b
        g = a
    return g


class CartanDatum:
    """A symmetrizable generalized Cartan matrix with its symmetrizer.

    A is n x n integral with a_ii = 2, a_ij <= 0 off-diagonal and
    a_ij = 0 iff a_ji = 0; D is the diagonal of minimal positive integers,
    with gcd 1 in each connected component, making DA symmetric.
    """

    def __init__(self, a, d=None):
        a = tuple(tuple(int(x) for x in row) for row in a)
        n = len(a)
        for i in range(n):
            if len(a[i]) != n or a[i][i] != 2:
                raise CartanError("not a generalized Cartan matrix")
            for j in range(n):
                if i != j:
                    if a[i][j] > 0:
                        raise CartanError("positive off-diagonal entry")
                    if (a[i][j] == 0) != (a[j][i] == 0):
                        raise CartanError("zero pattern is not symmetric")
        self.a = a
        self.n = n
        self.d = tuple(d) if d is not None else self._symmetrize()
        da = self.da()
        for i in range(n):
            for j in range(n):
                if da[i][j] != da[j][i]:
                    raise NotSymmetrizable("DA is not symmetric")

    def _symmetrize(self):
        """Propagate d_i a_ij = d_j a_ji along each connected component and
        clear denominators to the minimal positive integers (gcd 1)."""
        n = self.n
        w = [None] * n
        for root in range(n):
            if w[root] is not None:
                continue
            w[root] = Fraction(1)
            comp = [root]
            stack = [root]
            while stack:
                i = stack.pop()
                for j in range(n):
                    if self.a[i][j] == 0 or i == j:
                        continue
                    val = w[i] * Fraction(self.a[i][j], self.a[j][i])
                    if w[j] is None:
                        w[j] = val
                        comp.append(j)
                        stack.append(j)
                    elif w[j] != val:
                        raise NotSymmetrizable(
                            "inconsistent symmetrizer on a cycle")
            denom = 1
            for j in comp:
                d = w[j].denominator
                g = _gcd_list([denom, d])
                denom = denom * d // g
            nums = [int(w[j] * denom) for j in comp]
            g = _gcd_list(nums)
            for j, num in zip(comp, nums):
                w[j] = Fraction(num // g)
        return tuple(int(x) for x in w)

    def da(self):
        return tuple(tuple(Fraction(self.d[i] * self.a[i][j])
                           for j in range(self.n)) for i in range(self.n))

    def __repr__(self):
        return "CartanDatum(A=%r, D=%r)" % (self.a, self.d)


def symmetrize(a):
    """Return the Cartan datum with the minimal positive symmetrizer."""
    return CartanDatum(a)


class MpMatrix:
    """A multiparameter matrix P over TruncLaurent with P + P^T = 2 DA."""

    def __init__(self, p, cartan, check=True):
        self.p = tuple(tuple(r) for r in p)
        self.cartan = cartan
        if check:
            self._check()

    def _check(self):
        n = self.cartan.n
        da2 = [[2 * x for x in row] for row in self.cartan.da()]
        for i in range(n):
            for j in range(n):
                s = self.p[i][j] + self.p[j][i]
                chk = min(s.order, EXACT_ORDER - 1)
                if not s.eq_at(TruncLaurent.const(da2[i][j]), chk):
                    raise NotCartanType(
                        "P + P^T != 2DA at entry (%d, %d)" % (i + 1, j + 1))

    @property
    def n(self):
        return self.cartan.n

    def sym_part(self):
        """P_s = (P + P^T)/2, as a rational matrix (= DA)."""
        return self.cartan.da()

    def antisym_part(self):
        half = Fraction(1, 2)
        return tuple(tuple((self.p[i][j] - self.p[j][i]).scaled(half)
                           for j in range(self.n)) for i in range(self.n))

    def entry(self, i, j):
        return self.p[i][j]

    @classmethod
    def from_rational(cls, rows, cartan, order=EXACT_ORDER, vmax=2):
        p = tuple(tuple(TruncLaurent.const(x, order, vmax) for x in row)
                  for row in rows)
        return cls(p, cartan)

    @classmethod
    def canonical(cls, cartan, order=EXACT_ORDER, vmax=2):
        """P = DA, the symmetric multiparameter."""
        return cls.from_rational(cartan.da(), cartan, order, vmax)


def check_cartan_type(p, cartan):
    """Validate P + P^T = 2DA exactly and wrap the matrix."""
    return MpMatrix(p, cartan, check=True)


def _half_sum(u, v):
    return tuple((x + y).scaled(Fraction(1, 2)) for x, y in zip(u, v))


def _half_diff(u, v):
    return tuple((x - y).scaled(Fraction(1, 2)) for x, y in zip(u, v))


class Realization:
    """(h, roots, coroots) realizing a multiparameter matrix.

    h = k[[hbar]]^t with the standard basis; tplus/tminus are the coroot
    vectors, alphas the root covectors (coordinate functionals composed
    with the matrix amat = (alpha_l(H_g))).
    """

    def __init__(self, mp, tplus, tminus, alphas, check=True):
        self.mp = mp
        self.tplus = tuple(tuple(v) for v in tplus)
        self.tminus = tuple(tuple(v) for v in tminus)
        self.alphas = tuple(tuple(v) for v in alphas)
        self.t = len(self.alphas[0]) if self.alphas else 0
        self.n = mp.n
        self.s = tuple(_half_sum(self.tplus[i], self.tminus[i])
                       for i in range(self.n))
        self.lam = tuple(_half_diff(self.tplus[i], self.tminus[i])
                         for i in range(self.n))
        if check:
            self.verify_axioms()
        self.flags = self.classify()

    # -- pairing helpers ----------------------------------------------

    def alpha_apply(self, j, vec):
        acc = None
        for a, x in zip(self.alphas[j], vec):
            p = a * x
            acc = p if acc is None else acc + p
        return acc

    @property
    def amat(self):
        return self.alphas  # alpha_l(H_g) is just the covector coordinate

    def verify_axioms(self):
        for i in range(self.n):
            for j in range(self.n):
                pij = self.mp.entry(i, j)
                pji = self.mp.entry(j, i)
                v1 = self.alpha_apply(j, self.tplus[i])
                v2 = self.alpha_apply(j, self.tminus[i])
                chk = min(v1.order, v2.order, pij.order, pji.order,
                          EXACT_ORDER - 1)
                if not v1.eq_at(pij, chk) or not v2.eq_at(pji, chk):
                    raise CartanError(
                        "coroot/root pairing violates the multiparameter "
                        "matrix at (%d, %d)" % (i + 1, j + 1))
        smat = la.s_const_part(self.s)
        if la.q_rank(smat) != self.n:
            raise CartanError("the S_i are dependent mod hbar")

    def classify(self):
        """Recompute the straight/small/split/minimal flags."""
        straight = la.q_rank(la.s_const_part(self.alphas)) == self.n
        tmat = self.tplus + self.tminus
        split = la.q_rank(la.s_const_part(tmat)) == 2 * self.n
        minimal = la.q_rank(la.s_const_part(tmat)) == self.t
        small = True
        for i in range(self.n):
            if la.s_solve_rows(self.s, self.lam[i]) is None:
                small = False
                break
        return {"straight": straight, "small": small,
                "split": split, "minimal": minimal}

    def mod_h(self):
        """Rational reduction: (tplus, tminus, alphas) of constant terms."""
        cp = la.s_const_part
        return cp(self.tplus), cp(self.tminus), cp(self.alphas)

    def to_json(self):
        def mat(m):
            return [[x.to_json() for x in row] for row in m]
        return {
            "rank": self.t,
            "hbasis": ["H%d" % (g + 1) for g in range(self.t)],
            "tplus": mat(self.tplus),
            "tminus": mat(self.tminus),
            "alphas": mat(self.alphas),
            "amat": mat(self.amat),
            "flags": dict(self.flags),
        }


def make_standard_realization(p):
    """Split minimal realization on h = k[[hbar]]^(2n), basis the T's."""
    n = p.n
    order = min(x.order for row in p.p for x in row)
    vmax = p.p[0][0].vmax
    zero = TruncLaurent.zero(order, vmax)
    one = TruncLaurent.one(order, vmax)
    tplus = tuple(tuple(one if g == i else zero for g in range(2 * n))
                  for i in range(n))
    tminus = tuple(tuple(one if g == n + i else zero for g in range(2 * n))
                   for i in range(n))
    # alpha_j(T_i^+) = p_ij, alpha_j(T_i^-) = p_ji  =>  amat = (P^T | P)
    alphas = tuple(tuple(p.entry(i, j) for i in range(n)) +
                   tuple(p.entry(j, i) for i in range(n))
                   for j in range(n))
    return Realization(p, tplus, tminus, alphas)


def _principal_pivot(sym):
    """Lexicographically first index set carrying an invertible principal
    minor of a symmetric rational matrix."""
    n = len(sym)
    r = la.q_rank(sym)
    for subset in itertools.combinations(range(n), r):
        sub = [[sym[i][j] for j in subset] for i in subset]
        if la.q_rank(sub) == r:
            return subset, r
    return (), 0


def make_split_realization(p, ell):
    """Straight split realization of rank ell >= 3n - rk(P + P^T).

    Built from the block matrix whose rows fix the S_i and Lambda_i: the
    symmetric part (reordered so its leading r x r block is invertible)
    stacked against the antisymmetric part padded by identity blocks;
    roots are the first n coordinate functions.
    """
    n = p.n
    ps = p.sym_part()
    pa = p.antisym_part()
    subset, r = _principal_pivot(ps)
    if ell < 3 * n - r:
        raise RankTooSmall("need rank >= %d, got %d" % (3 * n - r, ell))
    perm = list(subset) + [i for i in range(n) if i not in subset]
    order = min(x.order for row in p.p for x in row)
    vmax = p.p[0][0].vmax
    zero = TruncLaurent.zero(order, vmax)
    one = TruncLaurent.one(order, vmax)

    def srow(i):
        # permuted symmetric row, then I_{n-r} block for the tail rows
        row = [TruncLaurent.const(ps[perm[i]][perm[j]], order, vmax)
               for j in range(n)]
        tail = [zero] * (ell - n)
        if i >= r:
            tail[i - r] = one
        return tuple(row + tail)

    def lrow(i):
        row = [pa[perm[i]][perm[j]] for j in range(n)]
        tail = [zero] * (ell - n)
        tail[(n - r) + i] = one
        return tuple(row + tail)

    s = [None] * n
    lam = [None] * n
    for i in range(n):
        s[perm[i]] = srow(i)
        lam[perm[i]] = lrow(i)
    tplus = tuple(tuple(a + b for a, b in zip(s[i], lam[i]))
                  for i in range(n))
    tminus = tuple(tuple(a - b for a, b in zip(s[i], lam[i]))
                   for i in range(n))
    alphas = [None] * n
    for j in range(n):
        cov = [zero] * ell
        cov = list(cov)
        cov[j] = one
        alphas[perm[j]] = tuple(cov)
    real = Realization(p, tplus, tminus, tuple(alphas))
    if not (real.flags["straight"] and real.flags["split"]):
        raise CartanError("split construction failed to certify")
    return real


def make_small_realization(p, ell=None):
    """Straight small realization; Lambda_i constrained to span{S_j}.

    Exists iff the antisymmetric part lies in the row space of the
    symmetric part; rank defaults to 2n - rk(P_s).
    """
    n = p.n
    ps = p.sym_part()
    subset, r = _principal_pivot(ps)
    if ell is None:
        ell = 2 * n - r
    if ell < 2 * n - r:
        raise RankTooSmall("need rank >= %d, got %d" % (2 * n - r, ell))
    pa = p.antisym_part()
    # coefficients C with C P_s = P_a  (row space condition)
    ps_series = la.s_const_mat(ps, EXACT_ORDER)
    c = []
    for i in range(n):
        coeffs = la.s_solve_rows(tuple(ps_series), pa[i])
        if coeffs is None:
            raise SmallObstruction(
                "antisymmetric part is outside the row space of the "
                "symmetric part")
        c.append(coeffs)
    perm = list(subset) + [i for i in range(n) if i not in subset]
    order = min(x.order for row in p.p for x in row)
    vmax = p.p[0][0].vmax
    zero = TruncLaurent.zero(order, vmax)
    one = TruncLaurent.one(order, vmax)

    s = [None] * n
    for i in range(n):
        row = [TruncLaurent.const(ps[perm[i]][perm[j]], order, vmax)
               for j in range(n)]
        tail = [zero] * (ell - n)
        if i >= r:
            tail[i - r] = one
        s[perm[i]] = tuple(row + tail)
    lam = []
    for i in range(n):
        acc = [zero] * ell
        for k in range(n):
            if c[i][k].is_zero():
                continue
            acc = [a + c[i][k] * b for a, b in zip(acc, s[k])]
        lam.append(tuple(acc))
    tplus = tuple(tuple(a + b for a, b in zip(s[i], lam[i]))
                  for i in range(n))
    tminus = tuple(tuple(a - b for a, b in zip(s[i], lam[i]))
                   for i in range(n))
    alphas = [None] * n
    for j in range(n):
        cov = [zero] * ell
        cov[j] = one
        alphas[perm[j]] = tuple(cov)
    real = Realization(p, tplus, tminus, tuple(alphas))
    if not (real.flags["straight"] and real.flags["small"]):
        raise CartanError("small construction failed to certify")
    return real


class TwistMatrix:
    """An antisymmetric t x t matrix over TruncLaurent."""

    def __init__(self, phi):
        self.phi = tuple(tuple(r) for r in phi)
        self.t = len(self.phi)
        for i in range(self.t):
            for j in range(self.t):
                s = self.phi[i][j] + self.phi[j][i]
                if not s.is_zero_at(min(s.order, EXACT_ORDER - 1)):
                    raise NotAntisymmetric("Phi^T != -Phi")

    @classmethod
    def from_rational(cls, rows, order=EXACT_ORDER, vmax=2):
        return cls(tuple(tuple(TruncLaurent.const(x, order, vmax)
                               for x in row) for row in rows))

    def add(self, other):
        return TwistMatrix(la.s_add(self.phi, other.phi))


class CocycleForm:
    """An antisymmetric bilinear form chi on h with chi(S_i, -) = 0.

    Stored as its matrix X on the coordinate basis; the induced n x n
    matrix ringx has entries chi(T_i^+, T_j^+).
    """

    def __init__(self, x, real):
        self.x = tuple(tuple(r) for r in x)
        self.real = real
        self.t = len(self.x)
        if self.t != real.t:
            raise CartanError("cocycle size does not match the realization")
        for i in range(self.t):
            for j in range(self.t):
                s = self.x[i][j] + self.x[j][i]
                if not s.is_zero_at(min(s.order, EXACT_ORDER - 1)):
                    raise NotAntisymmetric("X^T != -X")
        for i in range(real.n):
            row = la.s_matvec(self.x, real.s[i])
            for v in row:
                if not v.is_zero_at(min(v.order, EXACT_ORDER - 1)):
                    raise AltSViolated("chi(S_%d, -) != 0" % (i + 1))
        self.ringx = tuple(
            tuple(self.eval(real.tplus[i], real.tplus[j])
                  for j in range(real.n)) for i in range(real.n))

    def eval(self, u, v):
        """chi(u, v) for coordinate vectors u, v."""
        acc = None
        for g, ug in enumerate(u):
            if ug.is_zero():
                continue
            for k, vk in enumerate(v):
                if vk.is_zero() or self.x[g][k].is_zero():
                    continue
                p = ug * self.x[g][k] * vk
                acc = p if acc is None else acc + p
        if acc is None:
            acc = TruncLaurent.zero(min(e.order for r in self.x for e in r)
                                    if self.t else EXACT_ORDER)
        return acc

    def add(self, other):
        return CocycleForm(la.s_add(self.x, other.x), self.real)

    def mod_h(self):
        """Rational reduction of the form matrix."""
        return la.s_const_part(self.x)


def twist_realization(real, phi):
    """Twist deformation: P_Phi = P - A Phi A^T, coroots shifted by the
    Phi-weighted toral correction, roots unchanged."""
    if phi.t != real.t:
        raise NotAntisymmetric("Phi size does not match the realization")
    amat = real.amat
    corr = la.s_mul(amat, phi.phi)          # n x t, row l = alpha_l . Phi
    p_phi = la.s_sub(real.mp.p, la.s_mul(corr, la.s_transpose(amat)))
    new_p = MpMatrix(p_phi, real.mp.cartan)
    # T^pm_{Phi,l} = T^pm_l -+ (A Phi)_l  (sum_{g,k} alpha_l(H_g) phi_{gk} H_k
    # enters with opposite signs; phi_{kg} = -phi_{gk})
    tplus = tuple(tuple(a - b for a, b in zip(real.tplus[l], corr[l]))
                  for l in range(real.n))
    tminus = tuple(tuple(a + b for a, b in zip(real.tminus[l], corr[l]))
                   for l in range(real.n))
    new_r = Realization(new_p, tplus, tminus, real.alphas)
    return new_p, new_r


def split_stability(real, phi):
    """Invertibility certificate for twisting a split minimal realization.

    Returns (M, invertible) with
    M = I_n - P^T (Phi^{++} - Phi^{+-}) - P (Phi^{-+} - Phi^{--}),
    the blocks taken in the T-coordinate basis.
    """
    n = real.n
    if not (real.flags["split"] and real.flags["minimal"]):
        raise NotSplitMinimal("realization is not split minimal")
    if real.t != 2 * n:
        raise NotSplitMinimal("expected the T-basis of rank 2n")
    pp = real.mp.p
    blocks = {}
    for (name, r0, c0) in (("++", 0, 0), ("+-", 0, n),
                           ("-+", n, 0), ("--", n, n)):
        blocks[name] = tuple(tuple(phi.phi[r0 + i][c0 + j]
                                   for j in range(n)) for i in range(n))
    ptr = la.s_transpose(pp)
    m = la.s_sub(
        la.s_identity(n, min(x.order for r in pp for x in r)),
        la.s_add(la.s_mul(ptr, la.s_sub(blocks["++"], blocks["+-"])),
                 la.s_mul(pp, la.s_sub(blocks["-+"], blocks["--"]))))
    return m, la.s_is_invertible(m)


def cocycle_realization(real, chi):
    """2-cocycle deformation: P_(chi) = P + ringX, roots shifted by
    chi(-, T_i^+), coroots unchanged."""
    n = real.n
    p_chi = la.s_add(real.mp.p, chi.ringx)
    new_p = MpMatrix(p_chi, real.mp.cartan)
    xt = la.s_transpose(chi.x)
    alphas = []
    for i in range(n):
        # alpha_i + chi(-, T_i^+): covector g -> alpha_i(H_g) + chi(H_g, T_i^+)
        plus = la.s_matvec(chi.x, real.tplus[i])
        minus = la.s_matvec(chi.x, real.tminus[i])
        for a, b in zip(plus, minus):
            s = a + b
            if not s.is_zero_at(min(s.order, EXACT_ORDER - 1)):
                raise AltSViolated(
                    "chi(-, T_i^+) != -chi(-, T_i^-) for i=%d" % (i + 1))
        alphas.append(tuple(a + b for a, b in zip(real.alphas[i], plus)))
    del xt
    new_r = Realization(new_p, real.tplus, real.tminus, tuple(alphas))
    return new_p, new_r


def _antisym_diff(p, pprime):
    n = p.n
    lam = []
    for i in range(n):
        row = []
        for j in range(n):
            row.append(pprime.entry(i, j) - p.entry(i, j))
        lam.append(tuple(row))
    for i in range(n):
        for j in range(n):
            s = lam[i][j] + lam[j][i]
            if not s.is_zero_at(min(s.order, EXACT_ORDER - 1)):
                raise SymmetricPartMismatch("P and P' differ symmetrically")
    return tuple(lam)


def solve_twist_equiv(p, pprime, real):
    """A twist Phi with P_Phi = P', from a straight realization of P.

    Uses the block-Gauss recipe: pick the first column set of the root
    matrix with an invertible block G, put -G^{-1} Lambda G^{-T} in the
    corresponding block and zero elsewhere.
    """
    lam = _antisym_diff(p, pprime)
    n, t = real.n, real.t
    if not real.flags["straight"]:
        raise CartanError("twist solver needs a straight realization")
    amat = real.amat
    const = la.s_const_part(amat)
    pivots = None
    for subset in itertools.combinations(range(t), n):
        sub = [[const[i][j] for j in subset] for i in range(n)]
        if la.q_rank(sub) == n:
            pivots = subset
            break
    if pivots is None:
        raise CartanError("root matrix has rank below n")
    g = tuple(tuple(amat[i][j] for j in pivots) for i in range(n))
    ginv = la.s_inverse(g)
    block = la.s_mul(ginv, la.s_mul(la.s_neg(lam), la.s_transpose(ginv)))
    order = min(x.order for r in block for x in r)
    zero = TruncLaurent.zero(order, amat[0][0].vmax)
    phi_rows = [[zero] * t for _ in range(t)]
    for a, ga in enumerate(pivots):
        for b, gb in enumerate(pivots):
            phi_rows[ga][gb] = block[a][b]
    phi = TwistMatrix(tuple(tuple(r) for r in phi_rows))
    newp, _ = twist_realization(real, phi)
    chk = min(min(x.order for r in newp.p for x in r),
              min(x.order for r in pprime.p for x in r), EXACT_ORDER - 1)
    if not la.s_eq_at(newp.p, pprime.p, chk):
        raise CartanError("twist solver verification failed")
    return phi


def complete_to_basis(rows, t):
    """Complete rows (independent mod hbar) with standard vectors."""
    const = [list(map(Fraction, map(lambda x: x.constant(), r)))
             for r in rows]
    chosen = list(const)
    extra = []
    for g in range(t):
        cand = [Fraction(0)] * t
        cand[g] = Fraction(1)
        if la.q_rank(chosen + [cand]) > la.q_rank(chosen):
            chosen.append(cand)
            extra.append(g)
        if len(chosen) == t:
            break
    return extra


def solve_cocycle_equiv(p, pprime, real):
    """A cocycle chi with P_(chi) = P', from a split realization of P.

    ringX is forced to P' - P; the form is propagated to the T^- block by
    the S-annihilation rule and set to zero on a fixed complement.
    """
    lam = _antisym_diff(p, pprime)
    n, t = real.n, real.t
    if not real.flags["split"]:
        raise CartanError("cocycle solver needs a split realization")
    order = min(min(x.order for r in lam for x in r),
                min(x.order for r in real.tplus for x in r))
    vmax = real.tplus[0][0].vmax
    zero = TruncLaurent.zero(order, vmax)
    extra = complete_to_basis(real.tplus + real.tminus, t)
    mrows = list(real.tplus) + list(real.tminus)
    for g in extra:
        row = [zero] * t
        row = list(row)
        row[g] = TruncLaurent.one(order, vmax)
        mrows.append(tuple(row))
    m = tuple(mrows)
    # chi on the completed basis: [[L, -L, 0], [-L, L, 0], [0, 0, 0]]
    k = len(extra)
    rows = []
    for i in range(2 * n + k):
        row = []
        for j in range(2 * n + k):
            if i < n and j < n:
                row.append(lam[i][j])
            elif i < n and n <= j < 2 * n:
                row.append(-lam[i][j - n])
            elif n <= i < 2 * n and j < n:
                row.append(-lam[i - n][j])
            elif n <= i < 2 * n and n <= j < 2 * n:
                row.append(lam[i - n][j - n])
            else:
                row.append(zero)
        rows.append(tuple(row))
    chi_b = tuple(rows)
    minv = la.s_inverse(m)
    x = la.s_mul(minv, la.s_mul(chi_b, la.s_transpose(minv)))
    chi = CocycleForm(x, real)
    newp, _ = cocycle_realization(real, chi)
    chk = min(min(e.order for r in newp.p for e in r),
              min(e.order for r in pprime.p for e in r), EXACT_ORDER - 1)
    if not la.s_eq_at(newp.p, pprime.p, chk):
        raise CartanError("cocycle solver verification failed")
    return chi
