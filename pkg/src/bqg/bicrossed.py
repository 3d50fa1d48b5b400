"""Matched pairs, the finite-subgroup twist, and the bicrossed product.

A twist instance is a discrete group Gamma acting on a finite group G by
automorphisms together with a finite subgroup Lambda of Gamma; the compact
factor is H = G x| Lambda with left action alpha_gamma(g, r) = (tau_gamma(g), r)
and right action beta_{(g,r)}(gamma) = r^{-1} gamma r.  Irreducible classes
of the bicrossed product sit over beta-orbits, with isotypes classified by
the Mackey machinery on G x| Lambda_gamma.  For finite Gamma the concrete
crossed-product algebra carries the Fourier transform, the Sobolev-0-norm,
and the declared automorphism family.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .groups import (
    AutAction,
    FiniteGroup,
    FreeProduct,
    FreeProductAut,
    GroupError,
    SemidirectGroup,
)
from .mackey import (
    SemidirectContext,
    SemidirectIrrClass,
    classify_semidirect,
)
from .reps import ROUND_TOL, RepError, _round_int


class GammaOps:
    """Uniform element arithmetic for finite (ids) or enumerable (words) Gamma."""

    def __init__(self, gamma):
        self.raw = gamma
        self.finite = isinstance(gamma, FiniteGroup)

    @property
    def identity(self):
        return self.raw.identity if self.finite else ()

    def mul(self, a, b):
        return self.raw.multiply(a, b)

    def inv(self, a):
        return self.raw.invert(a)

    def name(self, a) -> str:
        return self.raw.names[a] if self.finite else self.raw.name(a)

    def sort_key(self, a):
        return a if self.finite else self.raw.sort_key(a)

    def scope(self, ball: int | None = None):
        """All elements (finite) or the ball (enumerable)."""
        if self.finite:
            return list(self.raw.elements())
        if ball is None:
            raise GroupError("enumerable Gamma needs a ball bound")
        return self.raw.ball(ball)

    def commutes(self, a, b) -> bool:
        return self.mul(a, b) == self.mul(b, a)


class TwistedMatchedPair:
    """Matched pair (Gamma, G x| Lambda) built from a twist, or the plain
    semidirect case (trivial Gamma, no twist).

    ``lam_elems[r]`` is the Gamma-element carried by Lambda-id r; for the
    plain case it is None and both actions are trivial.
    """

    def __init__(self, gamma, G: FiniteGroup, lam: FiniteGroup,
                 tau_lambda: AutAction, lam_elems, tau_gamma=None,
                 label: str = "bicrossed"):
        self.gamma = GammaOps(gamma)
        self.G = G
        self.lam = lam
        self.tau_lambda = tau_lambda
        self.lam_elems = lam_elems
        self._tau_gamma = tau_gamma
        self.label = label
        self.h: SemidirectGroup = SemidirectGroup(G, lam, tau_lambda)
        self._alpha_cache: dict = {}
        if lam_elems is not None:
            index = {}
            for r, w in enumerate(lam_elems):
                index[self._key(w)] = r
            self._lam_index = index

    @staticmethod
    def _key(elem):
        return elem if not isinstance(elem, np.integer) else int(elem)

    # -- the two actions ------------------------------------------------------

    def tau_gamma_perm(self, gamma_elem) -> np.ndarray:
        """Permutation of G induced by tau_gamma (identity for plain pairs)."""
        key = self._key(gamma_elem)
        if key not in self._alpha_cache:
            if self._tau_gamma is None:
                perm = np.arange(self.G.order)
            elif isinstance(self._tau_gamma, AutAction):
                perm = self._tau_gamma.table[gamma_elem]
            else:
                perm = self._tau_gamma.perm(gamma_elem)
            self._alpha_cache[key] = perm
        return self._alpha_cache[key]

    def alpha_perm(self, gamma_elem) -> np.ndarray:
        """alpha_gamma as a permutation of H: (g, r) -> (tau_gamma(g), r)."""
        tg = self.tau_gamma_perm(gamma_elem)
        nL = self.lam.order
        out = np.empty(self.h.order, dtype=np.int64)
        for g in range(self.G.order):
            base = g * nL
            tbase = int(tg[g]) * nL
            for r in range(nL):
                out[base + r] = tbase + r
        return out

    def alpha(self, gamma_elem, h_id: int) -> int:
        g, r = self.h.unpair(h_id)
        return self.h.pair_id(int(self.tau_gamma_perm(gamma_elem)[g]), r)

    def beta(self, gamma_elem, h_id: int):
        """gamma . (g, r) = r^{-1} gamma r (trivial for plain pairs)."""
        if self.lam_elems is None:
            return gamma_elem
        r = self.h.l_part(h_id)
        lam_word = self.lam_elems[r]
        ops = self.gamma
        return ops.mul(ops.inv(lam_word), ops.mul(gamma_elem, lam_word))

    def lambda_centralizer(self, gamma_elem) -> list[int]:
        """Lambda-ids r with lambda_r gamma = gamma lambda_r."""
        if self.lam_elems is None:
            return list(self.lam.elements())
        return [r for r in self.lam.elements()
                if self.gamma.commutes(self.lam_elems[r], gamma_elem)]

    # -- Prop-level nontriviality flags ---------------------------------------

    def alpha_trivial(self) -> bool:
        if self._tau_gamma is None:
            return True
        if isinstance(self._tau_gamma, AutAction):
            return bool(np.array_equal(
                self._tau_gamma.table,
                np.tile(np.arange(self.G.order), (self.gamma.raw.order, 1))))
        return all(np.array_equal(p, np.arange(self.G.order))
                   for p in self._tau_gamma.images)

    def beta_trivial(self) -> bool:
        """Trivial iff Lambda lies in the center of Gamma."""
        if self.lam_elems is None:
            return True
        ops = self.gamma
        if ops.finite:
            center = set(ops.raw.center())
            return all(self._key(w) in center or w in center for w in self.lam_elems)
        gens = [ops.raw.generator(i) for i in range(len(ops.raw.orders))]
        return all(all(ops.commutes(w, s) for s in gens) for w in self.lam_elems)


def matched_pair_from_twist(gamma, G: FiniteGroup, tau, lam_spec,
                            label: str = "twist") -> TwistedMatchedPair:
    """Build the matched pair (Gamma, G x| Lambda) from twist data.

    ``tau`` is an AutAction of a finite Gamma on G, or a FreeProductAut for
    an enumerable Gamma; ``lam_spec`` lists the Gamma-elements of the finite
    subgroup Lambda.  Raises GroupError when Lambda is not a subgroup or tau
    is not a valid action.
    """
    if isinstance(gamma, FiniteGroup):
        if not isinstance(tau, AutAction) or tau.L is not gamma or tau.G is not G:
            raise GroupError("tau must be an AutAction of Gamma on G")
        ids = sorted(int(x) for x in lam_spec)
        sub = gamma.subgroup(ids)  # raises if not a subgroup
        lam = sub.group
        lam_elems = [int(x) for x in sub.embed]
        tau_lambda = AutAction(lam, G, tau.table[sub.embed], validate=False)
        return TwistedMatchedPair(gamma, G, lam, tau_lambda, lam_elems, tau,
                                  label=label)
    if isinstance(gamma, FreeProduct):
        if not isinstance(tau, FreeProductAut) or tau.fp is not gamma:
            raise GroupError("tau must be a FreeProductAut of Gamma on G")
        words = sorted(set(lam_spec), key=gamma.sort_key)
        index = {w: i for i, w in enumerate(words)}
        if () not in index:
            raise GroupError("Lambda must contain the identity word")
        m = len(words)
        table = np.zeros((m, m), dtype=np.int64)
        for i, a in enumerate(words):
            for j, b in enumerate(words):
                c = gamma.multiply(a, b)
                if c not in index:
                    raise GroupError("Lambda words are not closed under multiplication")
                table[i, j] = index[c]
        lam = FiniteGroup(table, label="Lambda",
                          names=[gamma.name(w) for w in words])
        tau_lambda = AutAction(lam, G, np.stack([tau.perm(w) for w in words]))
        return TwistedMatchedPair(gamma, G, lam, tau_lambda, list(words), tau,
                                  label=label)
    raise GroupError("Gamma must be a FiniteGroup or a FreeProduct")


def matched_pair_plain(G: FiniteGroup, L: FiniteGroup, tau: AutAction,
                       label: str = "semidirect") -> TwistedMatchedPair:
    """Trivial-Gamma pair whose compact factor is the full G x| Lambda."""
    from .groups import cyclic_group
    gamma = cyclic_group(1)
    return TwistedMatchedPair(gamma, G, L, tau, None, None, label=label)


# ---------------------------------------------------------------------------
# matched-pair audit


@dataclass
class MatchedPairReport:
    checked: int
    violations: list

    @property
    def ok(self) -> bool:
        return not self.violations


def verify_matched_pair(mp, ball: int | None = 3) -> MatchedPairReport:
    """Exhaustive check of the compatibility relations.

    alpha_gamma(h k) = alpha_gamma(h) alpha_{beta_h(gamma)}(k),
    beta_h(r s) = beta_{alpha_s(h)}(r) beta_h(s),
    alpha_gamma(e) = e and beta_h(e) = e.
    Finite Gamma is checked on all elements, enumerable Gamma on ball(n).
    Violations are report content, not exceptions.
    """
    H = mp.h
    scope = mp.gamma.scope(ball)
    violations = []
    checked = 0
    e_h = H.identity
    e_g = mp.gamma.identity
    for gamma in scope:
        checked += 1
        if mp.alpha(gamma, e_h) != e_h:
            violations.append(("unit-alpha", gamma))
    for h in range(H.order):
        if mp.beta(e_g, h) != e_g:
            violations.append(("unit-beta", h))
    for gamma in scope:
        ap = [mp.alpha(gamma, h) for h in range(H.order)]
        for h in range(H.order):
            bh = mp.beta(gamma, h)
            for k in range(H.order):
                checked += 1
                lhs = mp.alpha(gamma, H.mul[h, k])
                rhs = H.mul[ap[h], mp.alpha(bh, k)]
                if lhs != rhs:
                    violations.append(("alpha-mult", gamma, h, k))
    for r in scope:
        for s in scope:
            rs = mp.gamma.mul(r, s)
            for h in range(H.order):
                checked += 1
                lhs = mp.beta(rs, h)
                rhs = mp.gamma.mul(mp.beta(r, mp.alpha(s, h)), mp.beta(s, h))
                if lhs != rhs:
                    violations.append(("beta-mult", r, s, h))
    return MatchedPairReport(checked, violations)


# ---------------------------------------------------------------------------
# beta-orbits and classification


@dataclass
class BetaOrbit:
    elements: tuple          # Gamma elements, sorted canonically
    base: object             # least element
    sections: dict           # mu -> h_id with beta_{sigma}(base) = mu, sigma_base = e
    lambda_ids: tuple        # Lambda-ids centralizing the base
    fingerprint: tuple       # sorted element names
    names: tuple

    @property
    def size(self) -> int:
        return len(self.elements)


@dataclass
class BicrossedIrrClass:
    index: int
    orbit: BetaOrbit
    isotype: SemidirectIrrClass
    dim: int

    @property
    def class_id(self) -> str:
        return f"{'|'.join(self.orbit.names)}#{self.isotype.index}"


class BicrossedInstance:
    """Classification, fusion and conjugation engine for one matched pair.

    All computations are pure; orbits and per-isotropy classifications are
    memoized (insert-once) keyed by canonical fingerprints.
    """

    def __init__(self, mp: TwistedMatchedPair, seed: int = 0):
        self.mp = mp
        self.seed = seed
        self._orbits: dict = {}
        self._iso_ctx: dict = {}
        self._iso_classes: dict = {}
        self._diag_chars: dict = {}
        self._classes: list[BicrossedIrrClass] | None = None
        self._classes_ball: int | None = None

    # -- orbits ---------------------------------------------------------------

    def beta_orbit(self, gamma_elem) -> BetaOrbit:
        mp = self.mp
        elems = sorted({mp.beta(gamma_elem, h) for h in range(mp.h.order)},
                       key=mp.gamma.sort_key)
        names = tuple(mp.gamma.name(x) for x in elems)
        fp = tuple(sorted(names))
        if fp in self._orbits:
            return self._orbits[fp]
        base = elems[0]
        sections = {}
        for mu in elems:
            cands = [h for h in range(mp.h.order) if mp.beta(base, h) == mu]
            sections[self._ekey(mu)] = (mp.h.identity if mu == base
                                        else min(cands))
        orbit = BetaOrbit(tuple(elems), base, sections,
                          tuple(mp.lambda_centralizer(base)), fp, names)
        self._orbits[fp] = orbit
        return orbit

    @staticmethod
    def _ekey(elem):
        return int(elem) if isinstance(elem, (int, np.integer)) else elem

    def g_rs(self, r, s) -> list[int]:
        """The clopen set {h in H : beta_h(r) = s}."""
        mp = self.mp
        return [h for h in range(mp.h.order) if mp.beta(r, h) == s]

    # -- per-isotropy Mackey classification ------------------------------------

    def isotropy_context(self, lambda_ids) -> SemidirectContext:
        key = tuple(int(r) for r in lambda_ids)
        if key not in self._iso_ctx:
            sub = self.mp.lam.subgroup(list(key))
            tau = AutAction(sub.group, self.mp.G,
                            self.mp.tau_lambda.table[sub.embed], validate=False)
            ctx = SemidirectContext(self.mp.G, sub.group, tau, seed=self.seed)
            ctx.lam_subgroup = sub
            self._iso_ctx[key] = ctx
        return self._iso_ctx[key]

    def isotropy_classes(self, lambda_ids):
        key = tuple(int(r) for r in lambda_ids)
        if key not in self._iso_classes:
            self._iso_classes[key] = classify_semidirect(self.isotropy_context(key))
        return self._iso_classes[key]

    def isotropy_h_ids(self, orbit: BetaOrbit) -> list[int]:
        """H-ids of the isotropy subgroup G x| Lambda_base of the base point."""
        return [self.mp.h.pair_id(g, r) for g in self.mp.G.elements()
                for r in orbit.lambda_ids]

    def small_id(self, orbit: BetaOrbit, h_id: int) -> int:
        """Map an isotropy H-element to its id in the small product group."""
        ctx = self.isotropy_context(orbit.lambda_ids)
        g, r = self.mp.h.unpair(h_id)
        return ctx.product.pair_id(g, ctx.lam_subgroup.index_of(r))

    # -- classification ---------------------------------------------------------

    def classify(self, ball: int | None = None) -> list[BicrossedIrrClass]:
        if self._classes is not None and self._classes_ball == ball:
            return self._classes
        mp = self.mp
        orbits = []
        seen = set()
        for gamma in mp.gamma.scope(ball):
            orb = self.beta_orbit(gamma)
            if orb.fingerprint not in seen:
                seen.add(orb.fingerprint)
                orbits.append(orb)
        orbits.sort(key=lambda o: mp.gamma.sort_key(o.base))
        classes = []
        for orb in orbits:
            for iso in self.isotropy_classes(orb.lambda_ids):
                classes.append(BicrossedIrrClass(len(classes), orb, iso,
                                                 orb.size * iso.dim))
        if mp.gamma.finite and ball is None:
            total = sum(c.dim ** 2 for c in classes)
            expect = mp.gamma.raw.order * mp.h.order
            if total != expect:
                raise RepError(f"bicrossed classification incomplete: "
                               f"{total} != {expect}")
        self._classes = classes
        self._classes_ball = ball
        return classes

    def trivial_class(self) -> BicrossedIrrClass:
        classes = self.classify(self._classes_ball)
        for c in classes:
            if c.orbit.size == 1 and c.orbit.base == self.mp.gamma.identity \
                    and c.isotype.index == 0:
                return c
        raise RepError("trivial class not found")

    # -- O-representation blocks -------------------------------------------------

    def orep_block(self, cls: BicrossedIrrClass, r, s, sections=None) -> np.ndarray:
        """u_{r,s} as an (|H|, d, d) array: u(sigma_r h sigma_s^{-1}) on G_{r,s}.

        ``sections`` overrides the canonical section choice (used by the
        section-independence audit).
        """
        mp = self.mp
        orbit = cls.orbit
        sections = orbit.sections if sections is None else sections
        w = cls.isotype.realized
        d = cls.isotype.dim
        out = np.zeros((mp.h.order, d, d), dtype=np.complex128)
        sig_r = sections[self._ekey(r)]
        sig_s_inv = mp.h.invert(sections[self._ekey(s)])
        for h in self.g_rs(r, s):
            prod = mp.h.multiply(mp.h.multiply(sig_r, h), sig_s_inv)
            out[h] = w.matrices[self.small_id(orbit, prod)]
        return out

    def diag_characters(self, cls: BicrossedIrrClass) -> dict:
        """Per orbit element r: array over H of tr u_{r,r}(h) (zero off G_r)."""
        key = (cls.orbit.fingerprint, cls.isotype.index)
        if key not in self._diag_chars:
            chars = {}
            for r in cls.orbit.elements:
                block = self.orep_block(cls, r, r)
                chars[self._ekey(r)] = np.trace(block, axis1=1, axis2=2)
            self._diag_chars[key] = chars
        return self._diag_chars[key]

    # -- fusion (twisted tensor product) ------------------------------------------

    def fusion(self, x1: BicrossedIrrClass, x2: BicrossedIrrClass,
               x3: BicrossedIrrClass) -> int:
        """dim Mor(W3, W1 x W2): multiplicity of x3 in x1 (x) x2.

        Zero when the orbit of x3 misses the product set; otherwise the
        gamma-twisted tensor multiplicity, checked to agree for every
        gamma in the orbit of x3.
        """
        mp = self.mp
        prod = {}
        for a in x1.orbit.elements:
            for b in x2.orbit.elements:
                prod.setdefault(self._ekey(mp.gamma.mul(a, b)), []).append((a, b))
        if self._ekey(x3.orbit.base) not in prod:
            return 0
        chars1 = self.diag_characters(x1)
        chars2 = self.diag_characters(x2)
        chars3 = self.diag_characters(x3)
        vals = []
        for gamma in x3.orbit.elements:
            pairs = prod.get(self._ekey(gamma))
            if pairs is None:
                raise RepError("orbit of x3 is not contained in the product set")
            iso = [h for h in range(mp.h.order) if mp.beta(gamma, h) == gamma]
            acc = 0.0 + 0j
            for h in iso:
                t = 0.0 + 0j
                for (a, b) in pairs:
                    hb = self.mp.alpha(b, h)  # first factor twisted by alpha_{r_2}
                    t += chars1[self._ekey(a)][hb] * chars2[self._ekey(b)][h]
                acc += np.conj(chars3[self._ekey(gamma)][h]) * t
            vals.append(_round_int(acc / len(iso), ROUND_TOL, "bicrossed fusion"))
        if len(set(vals)) != 1:
            raise RepError(f"gamma-independence violated: {vals}")
        return vals[0]

    # -- conjugation ---------------------------------------------------------------

    def conjugate_class(self, cls: BicrossedIrrClass) -> BicrossedIrrClass:
        """The conjugate class: over the inverse orbit, isotype from the
        dagger blocks (entrywise structure: transpose of the inverse-twisted
        block)."""
        mp = self.mp
        base_inv = mp.gamma.inv(cls.orbit.base)
        orbit2 = self.beta_orbit(base_inv)
        b = orbit2.base
        b_inv = mp.gamma.inv(b)
        # chi''(h) = tr u_{b^-1, b^-1}(alpha_b(h)^{-1}) for h in the isotropy of b
        diag = self.diag_characters(cls)[self._ekey(b_inv)]
        ctx = self.isotropy_context(orbit2.lambda_ids)
        iso_classes = self.isotropy_classes(orbit2.lambda_ids)
        small = ctx.product
        chi = np.zeros(small.order, dtype=np.complex128)
        alpha_b = mp.alpha_perm(b)
        for h in self.isotropy_h_ids(orbit2):
            k = mp.h.invert(int(alpha_b[h]))
            chi[self.small_id(orbit2, h)] = diag[k]
        hits = [c for c in iso_classes if np.abs(c.character - chi).max() < 1e-6]
        if len(hits) != 1:
            raise RepError("conjugate isotype does not match a unique class")
        classes = self.classify(self._classes_ball)
        for c in classes:
            if c.orbit.fingerprint == orbit2.fingerprint \
                    and c.isotype.index == hits[0].index:
                if c.dim != cls.dim:
                    raise RepError("conjugation does not preserve dimension")
                return c
        raise RepError("conjugate class not in the classified list")


# ---------------------------------------------------------------------------
# concrete crossed-product algebra (finite Gamma)


class CrossedProductAlgebra:
    """The crossed product of functions on H by a finite Gamma.

    Elements are (|Gamma|, |H|) coefficient arrays, a = sum_gamma u_gamma f_gamma.
    Products use the covariance u_gamma f u_gamma^* = f o alpha_{gamma^{-1}};
    the Haar state is h(u_gamma f) = [gamma = e] * mean(f).  The left regular
    representation on l2(Gamma x H) is faithful and isometric, so operator
    norms are largest singular values of regular matrices.
    """

    def __init__(self, instance: BicrossedInstance):
        mp = instance.mp
        if not mp.gamma.finite:
            raise RepError("the concrete algebra needs a finite Gamma")
        self.instance = instance
        self.mp = mp
        self.ng = mp.gamma.raw.order
        self.nh = mp.h.order
        self.gmul = mp.gamma.raw.mul
        self.ginv = mp.gamma.raw.inv
        self.alpha_tab = np.stack([mp.alpha_perm(g) for g in range(self.ng)])
        self.beta_tab = np.array(
            [[mp.beta(g, h) for h in range(self.nh)] for g in range(self.ng)],
            dtype=np.int64,
        )
        self._reg_units = None

    # -- element arithmetic ----------------------------------------------------

    def zeros(self) -> np.ndarray:
        return np.zeros((self.ng, self.nh), dtype=np.complex128)

    def one(self) -> np.ndarray:
        a = self.zeros()
        a[self.mp.gamma.raw.identity, :] = 1.0
        return a

    def u_gamma(self, gamma_id: int) -> np.ndarray:
        a = self.zeros()
        a[gamma_id, :] = 1.0
        return a

    def func(self, values) -> np.ndarray:
        a = self.zeros()
        a[self.mp.gamma.raw.identity, :] = np.asarray(values, dtype=np.complex128)
        return a

    def mul(self, a, b) -> np.ndarray:
        out = self.zeros()
        for g in range(self.ng):
            fa = a[g]
            if not fa.any():
                continue
            for m in range(self.ng):
                fb = b[m]
                if not fb.any():
                    continue
                out[self.gmul[g, m]] += fa[self.alpha_tab[m]] * fb
        return out

    def star(self, a) -> np.ndarray:
        out = self.zeros()
        for g in range(self.ng):
            gi = self.ginv[g]
            out[gi] = np.conj(a[g])[self.alpha_tab[gi]]
        return out

    def haar(self, a) -> complex:
        return complex(np.mean(a[self.mp.gamma.raw.identity]))

    def regular(self, a) -> np.ndarray:
        """Matrix of a on l2(Gamma x H): u_gamma shifts, f acts by f(alpha_r(h))."""
        N = self.ng * self.nh
        M = np.zeros((N, N), dtype=np.complex128)
        hrange = np.arange(self.nh)
        for g in range(self.ng):
            if not a[g].any():
                continue
            for r in range(self.ng):
                vals = a[g][self.alpha_tab[r]]
                M[self.gmul[g, r] * self.nh + hrange, r * self.nh + hrange] += vals
        return M

    def op_norm(self, a) -> float:
        return float(np.linalg.norm(self.regular(a), 2))

    # -- comultiplication (tensor-square audit support) --------------------------

    def delta_u(self, gamma_id: int) -> np.ndarray:
        """Delta(u_gamma) = sum_{mu in gamma . H} u_gamma v_{gamma,mu} (x) u_mu."""
        out = np.zeros((self.ng, self.nh, self.ng, self.nh), dtype=np.complex128)
        for h in range(self.nh):
            mu = int(self.beta_tab[gamma_id, h])
            out[gamma_id, h, mu, :] = 1.0
        return out

    def delta_func(self, values) -> np.ndarray:
        out = np.zeros((self.ng, self.nh, self.ng, self.nh), dtype=np.complex128)
        e = self.mp.gamma.raw.identity
        vals = np.asarray(values, dtype=np.complex128)
        out[e, :, e, :] = vals[self.mp.h.mul]
        return out

    def delta(self, a) -> np.ndarray:
        out = np.zeros((self.ng, self.nh, self.ng, self.nh), dtype=np.complex128)
        for g in range(self.ng):
            if a[g].any():
                out += self.delta_mul(self.delta_u(g), self.delta_func(a[g]))
        return out

    def delta_mul(self, x, y) -> np.ndarray:
        """Multiplication in the tensor square, legwise."""
        out = np.zeros_like(x)
        for g1 in range(self.ng):
            for g2 in range(self.ng):
                if not x[g1, :, g2, :].any():
                    continue
                for m1 in range(self.ng):
                    for m2 in range(self.ng):
                        yb = y[m1, :, m2, :]
                        if not yb.any():
                            continue
                        xa = x[g1, :, g2, :]
                        block = xa[np.ix_(self.alpha_tab[m1], self.alpha_tab[m2])] * yb
                        out[self.gmul[g1, m1], :, self.gmul[g2, m2], :] += block
        return out


@dataclass
class QGAutomorphism:
    """A quantum-group automorphism from a compatible pair of permutations.

    ``phi`` permutes Gamma, ``psi`` permutes H; theta(u_gamma f) =
    u_{phi(gamma)} (f o psi^{-1}).  Validity (both are group automorphisms,
    alpha- and beta-equivariance) is checked on construction.
    """

    algebra: CrossedProductAlgebra
    phi: np.ndarray
    psi: np.ndarray
    name: str = "theta"

    def __post_init__(self):
        alg = self.algebra
        gam, H = alg.mp.gamma.raw, alg.mp.h
        if not np.array_equal(self.phi[gam.mul], gam.mul[np.ix_(self.phi, self.phi)]):
            raise RepError("phi is not an automorphism of Gamma")
        if not np.array_equal(self.psi[H.mul], H.mul[np.ix_(self.psi, self.psi)]):
            raise RepError("psi is not an automorphism of H")
        for g in range(alg.ng):
            if not np.array_equal(alg.alpha_tab[self.phi[g]][self.psi],
                                  self.psi[alg.alpha_tab[g]]):
                raise RepError("alpha-equivariance fails")
            if not np.array_equal(alg.beta_tab[self.phi[g]][self.psi],
                                  self.phi[alg.beta_tab[g]]):
                raise RepError("beta-equivariance fails")

    def apply(self, a) -> np.ndarray:
        out = self.algebra.zeros()
        for g in range(self.algebra.ng):
            row = np.empty(self.algebra.nh, dtype=np.complex128)
            row[self.psi] = a[g]
            out[self.phi[g]] = row
        return out


def twist_automorphisms(alg: CrossedProductAlgebra) -> list[QGAutomorphism]:
    """The declared automorphism family of a finite instance.

    Twist instances get theta_r for r in Lambda (phi = Ad_{lambda_r} on Gamma,
    psi = tau_r x Ad_r on H); plain semidirect instances get all inner
    automorphisms of H.
    """
    mp = alg.mp
    out = []
    if mp.lam_elems is not None:
        gam = mp.gamma.raw
        for r in mp.lam.elements():
            lam_word = mp.lam_elems[r]
            phi = np.array([gam.conjugate(lam_word, x) for x in gam.elements()],
                           dtype=np.int64)
            psi = np.array(
                [mp.h.pair_id(int(mp.tau_lambda.table[r, mp.h.g_part(i)]),
                              mp.lam.conjugate(r, mp.h.l_part(i)))
                 for i in range(mp.h.order)], dtype=np.int64)
            out.append(QGAutomorphism(alg, phi, psi, name=f"theta_{mp.lam.names[r]}"))
    else:
        phi = np.arange(mp.gamma.raw.order, dtype=np.int64)
        for k in range(mp.h.order):
            psi = np.array([mp.h.conjugate(k, i) for i in range(mp.h.order)],
                           dtype=np.int64)
            out.append(QGAutomorphism(alg, phi, psi, name=f"Ad_{mp.h.names[k]}"))
    return out


class QuantumFourier:
    """Realized class unitaries, Fourier transform and Sobolev-0-norm."""

    def __init__(self, instance: BicrossedInstance):
        self.instance = instance
        self.alg = CrossedProductAlgebra(instance)
        self.classes = instance.classify()
        self._realized: dict = {}
        self._characters: dict = {}

    def realized(self, x: BicrossedIrrClass) -> np.ndarray:
        """W^x as a (D, D, |Gamma|, |H|) array of algebra coefficients."""
        if x.index not in self._realized:
            mp = self.instance.mp
            orbit = x.orbit
            d = x.isotype.dim
            D = orbit.size * d
            W = np.zeros((D, D, self.alg.ng, self.alg.nh), dtype=np.complex128)
            for ri, r in enumerate(orbit.elements):
                gamma_id = int(r)
                for si, s in enumerate(orbit.elements):
                    block = self.instance.orep_block(x, r, s)  # (|H|, d, d)
                    for i in range(d):
                        for j in range(d):
                            W[ri * d + i, si * d + j, gamma_id, :] = block[:, i, j]
            self._realized[x.index] = W
        return self._realized[x.index]

    def character(self, x: BicrossedIrrClass) -> np.ndarray:
        if x.index not in self._characters:
            W = self.realized(x)
            self._characters[x.index] = np.einsum("iiab->ab", W)
        return self._characters[x.index]

    def check_realized_unitary(self, x: BicrossedIrrClass, tol=1e-9) -> float:
        """Max residual of W W^* = id (x) 1 in the algebra."""
        W = self.realized(x)
        D = W.shape[0]
        worst = 0.0
        for i in range(D):
            for j in range(D):
                acc = self.alg.zeros()
                for k in range(D):
                    acc += self.alg.mul(W[i, k], self.alg.star(W[j, k]))
                target = self.alg.one() if i == j else self.alg.zeros()
                worst = max(worst, float(np.abs(acc - target).max()))
        if worst > tol * D:
            raise RepError(f"realized unitary fails: residual {worst:.2e}")
        return worst

    def fourier(self, blocks: dict) -> np.ndarray:
        """F(a) = sum_x dim x * (Tr (x) id)(W^x (a_x (x) 1)) as an algebra element."""
        out = self.alg.zeros()
        for idx, a_x in blocks.items():
            x = self._class_by_index(idx)
            a_x = np.asarray(a_x, dtype=np.complex128)
            if a_x.shape != (x.dim, x.dim):
                raise RepError(f"block {idx} has wrong shape")
            W = self.realized(x)
            out += x.dim * np.einsum("ki,ikab->ab", a_x, W)
        return out

    def _class_by_index(self, idx: int) -> BicrossedIrrClass:
        for c in self.classes:
            if c.index == idx:
                return c
        raise RepError(f"block index {idx} outside the classified index set")

    def sobolev0(self, blocks: dict) -> float:
        total = 0.0
        for idx, a_x in blocks.items():
            x = self._class_by_index(idx)
            a_x = np.asarray(a_x, dtype=np.complex128)
            total += x.dim * float(np.sum(np.abs(a_x) ** 2))
        return float(np.sqrt(total))

    def fourier_and_sobolev(self, blocks: dict) -> tuple[float, float]:
        """(operator norm of F(a) in the regular representation, ||a||_0)."""
        return self.alg.op_norm(self.fourier(blocks)), self.sobolev0(blocks)

    # -- automorphism pushforward ------------------------------------------------

    def class_pushforward(self, theta: QGAutomorphism) -> dict:
        """The permutation x -> theta_*(x) on class indices."""
        out = {}
        for x in self.classes:
            chi = theta.apply(self.character(x))
            hits = [y.index for y in self.classes
                    if y.dim == x.dim
                    and abs(self.alg.haar(self.alg.mul(self.alg.star(self.character(y)),
                                                       chi)) - 1) < 1e-6]
            if len(hits) != 1:
                raise RepError("pushforward class is not unique")
            out[x.index] = hits[0]
        return out

    def _intertwiner(self, theta: QGAutomorphism, x: BicrossedIrrClass,
                     y: BicrossedIrrClass, seed: int = 11) -> np.ndarray:
        """Unitary T in Mor(W^y, theta_*(W^x)) via Haar averaging."""
        Wx = self.realized(x)
        V = np.empty_like(Wx)
        D = Wx.shape[0]
        for i in range(D):
            for j in range(D):
                V[i, j] = theta.apply(Wx[i, j])
        U = self.realized(y)
        hmat = np.zeros((D, D, D, D), dtype=np.complex128)  # [i,k,j,l]
        for i in range(D):
            for k in range(D):
                for j in range(D):
                    for l in range(D):
                        hmat[i, k, j, l] = self.alg.haar(
                            self.alg.mul(V[i, k], self.alg.star(U[j, l])))
        rng = np.random.default_rng(seed)
        for _ in range(8):
            X = rng.standard_normal((D, D)) + 1j * rng.standard_normal((D, D))
            T = np.einsum("ikjl,kl->ij", hmat, X)
            if np.abs(T).max() > 1e-8:
                c = np.trace(T.conj().T @ T).real / D
                T = T / np.sqrt(c)
                if np.abs(T.conj().T @ T - np.eye(D)).max() < 1e-7:
                    return T
        raise RepError("failed to build a unitary quantum intertwiner")

    def pushforward(self, theta: QGAutomorphism, blocks: dict) -> dict:
        """theta-hat on block elements: b_{theta_*(x)} = T^* a_x T."""
        perm = self.class_pushforward(theta)
        out = {}
        for idx, a_x in blocks.items():
            x = self._class_by_index(idx)
            y = self._class_by_index(perm[idx])
            T = self._intertwiner(theta, x, y)
            out[y.index] = T.conj().T @ np.asarray(a_x, dtype=np.complex128) @ T
        return out
