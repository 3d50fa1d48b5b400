"""Instance configuration: parsing, validation and construction.

An instance document is a JSON object with a ``kind`` of ``semidirect``,
``bicrossed`` or ``direct-sum-length``; see the presets for worked
examples.  Validation failures raise ConfigError with the offending path.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from . import groups as G
from .bicrossed import (
    BicrossedInstance,
    QuantumFourier,
    TwistedMatchedPair,
    matched_pair_from_twist,
    matched_pair_plain,
)
from .mackey import SemidirectContext, classify_semidirect
from .lengths import (
    DirectSumLength,
    LengthFunction,
    _frac,
    average_length,
    build_affording_family,
    dual_length_semidirect,
    free_word_length,
    word_length_function,
)


class ConfigError(ValueError):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


def _need(doc: dict, key: str, path: str):
    if key not in doc:
        raise ConfigError(f"{path}.{key}", "missing required field")
    return doc[key]


def _build_group(spec, path: str):
    try:
        return G.build_group(spec)
    except (G.GroupError, KeyError, TypeError, ValueError) as exc:
        raise ConfigError(path, str(exc)) from exc


def _build_finite_tau(spec, gamma, g, path: str) -> G.AutAction:
    if not isinstance(spec, dict) or "kind" not in spec:
        raise ConfigError(path, "tau must be an object with a 'kind'")
    kind = spec["kind"]
    try:
        if kind == "trivial":
            return G.AutAction.trivial(gamma, g)
        if kind == "inversion":
            return G.AutAction.inversion(gamma, g)
        if kind == "parity-inversion":
            if not hasattr(gamma, "perm_tuples"):
                raise ConfigError(path, "parity-inversion needs a symmetric Gamma")
            tab = np.empty((gamma.order, g.order), dtype=np.int64)
            for a in gamma.elements():
                tab[a] = (np.arange(g.order)
                          if G.permutation_parity(gamma, a) == 0 else g.inv)
            return G.AutAction(gamma, g, tab)
        if kind == "power":
            perm = np.array([g.power(x, int(spec["k"])) for x in g.elements()])
            return G.AutAction.from_generator_images(
                gamma, g, {int(spec.get("generator", 1)): perm})
        if kind == "images":
            images = {int(r): np.asarray(p, dtype=np.int64)
                      for r, p in spec["images"].items()}
            return G.AutAction.from_generator_images(gamma, g, images)
    except G.GroupError as exc:
        raise ConfigError(path, str(exc)) from exc
    raise ConfigError(path, f"unknown tau kind {kind!r}")


@dataclass
class LengthSpec:
    gamma_generators: list = field(default_factory=list)
    dual_base: dict = field(default_factory=dict)


def _parse_lengths(doc, path: str) -> LengthSpec:
    spec = doc.get("lengths", {})
    gens = spec.get("gamma_generators", [])
    base = {int(k): _frac(v) for k, v in spec.get("dual_base", {}).items()}
    return LengthSpec(gens, base)


@dataclass
class RunParams:
    kmax: int = 4
    seed: int = 0
    tol: float = 1e-9
    samples: int = 4
    iters: int = 30
    ball: int = 3
    nmax: int = 1024


def _parse_params(doc) -> RunParams:
    p = RunParams()
    for key in ("kmax", "seed", "samples", "iters", "ball", "nmax"):
        if key in doc:
            setattr(p, key, int(doc[key]))
    if "tol" in doc:
        p.tol = float(doc["tol"])
    return p


class SemidirectInstance:
    """A finite semidirect instance: Mackey context plus the plain quantum
    algebra over the trivial-Gamma matched pair."""

    kind = "semidirect"

    def __init__(self, label, g, lam, tau, lengths: LengthSpec, params: RunParams):
        self.label = label
        self.ctx = SemidirectContext(g, lam, tau, seed=params.seed)
        self.lengths = lengths
        self.params = params
        self._classes = None
        self._mp = None

    @property
    def classes(self):
        if self._classes is None:
            self._classes = classify_semidirect(self.ctx)
        return self._classes

    def matched_pair(self) -> TwistedMatchedPair:
        if self._mp is None:
            self._mp = matched_pair_plain(self.ctx.G, self.ctx.L, self.ctx.tau,
                                          label=self.label)
        return self._mp

    def dual_length(self) -> LengthFunction:
        if not self.lengths.dual_base:
            raise ConfigError("lengths.dual_base", "required for this command")
        return dual_length_semidirect(self.ctx, self.classes, self.lengths.dual_base)


class BicrossedConfigured:
    """A twist instance with its length data."""

    kind = "bicrossed"

    def __init__(self, label, mp: TwistedMatchedPair, lengths: LengthSpec,
                 params: RunParams):
        self.label = label
        self.mp = mp
        self.instance = BicrossedInstance(mp, seed=params.seed)
        self.lengths = lengths
        self.params = params

    @property
    def finite(self) -> bool:
        return self.mp.gamma.finite

    def classes(self):
        return self.instance.classify(None if self.finite else self.params.ball)

    def gamma_length(self) -> LengthFunction:
        """Word length on Gamma averaged over Ad_Lambda (beta-invariant)."""
        mp = self.mp
        if mp.gamma.finite:
            if not self.lengths.gamma_generators:
                raise ConfigError("lengths.gamma_generators",
                                  "required for this command")
            raw = word_length_function(mp.gamma.raw,
                                       [int(x) for x in self.lengths.gamma_generators])
            sample = list(mp.gamma.raw.elements())
        else:
            raw = free_word_length(mp.gamma.raw)
            sample = mp.gamma.raw.ball(3)
        ops = mp.gamma
        ad = [
            (lambda x, w=w: ops.mul(ops.inv(w), ops.mul(x, w)))
            for w in (mp.lam_elems or [ops.identity])
        ]
        return average_length(raw, ad, sample, label="adL-word")

    def affording(self):
        fam = build_affording_family(self.instance, self.classes(),
                                     self.gamma_length(), self.lengths.dual_base)
        return fam

    def fourier(self) -> QuantumFourier:
        if not self.finite:
            raise ConfigError("kind", "Fourier data needs a finite Gamma")
        return QuantumFourier(self.instance)


class WeightedSumInstance:
    kind = "direct-sum-length"

    def __init__(self, label, order, params: RunParams):
        self.label = label
        self.dsl = DirectSumLength(lambda i: order)
        self.order = order
        self.params = params


def load_instance(doc: dict):
    """Build a validated instance from a JSON document."""
    if not isinstance(doc, dict):
        raise ConfigError("$", "instance document must be an object")
    kind = _need(doc, "kind", "$")
    label = doc.get("label", kind)
    params = _parse_params(doc)
    lengths = _parse_lengths(doc, "$.lengths")
    if kind == "semidirect":
        g = _build_group(_need(doc, "g", "$"), "$.g")
        lam = _build_group(_need(doc, "lambda", "$"), "$.lambda")
        if not isinstance(g, G.FiniteGroup) or not isinstance(lam, G.FiniteGroup):
            raise ConfigError("$.g", "semidirect factors must be finite")
        tau = _build_finite_tau(_need(doc, "tau", "$"), lam, g, "$.tau")
        return SemidirectInstance(label, g, lam, tau, lengths, params)
    if kind == "bicrossed":
        gamma = _build_group(_need(doc, "gamma", "$"), "$.gamma")
        g = _build_group(_need(doc, "g", "$"), "$.g")
        if not isinstance(g, G.FiniteGroup):
            raise ConfigError("$.g", "the twisted factor must be finite")
        lam_spec = _need(doc, "lambda", "$")
        tau_spec = _need(doc, "tau", "$")
        if isinstance(gamma, G.FiniteGroup):
            tau = _build_finite_tau(tau_spec, gamma, g, "$.tau")
            gens = [int(x) for x in _need(lam_spec, "generators", "$.lambda")]
            try:
                lam_ids = gamma.subgroup_closure(gens)
                mp = matched_pair_from_twist(gamma, g, tau, lam_ids, label=label)
            except G.GroupError as exc:
                raise ConfigError("$.lambda", str(exc)) from exc
        else:
            if not (isinstance(tau_spec, dict) and tau_spec.get("kind") == "factor-images"):
                raise ConfigError("$.tau",
                                  "enumerable Gamma needs tau kind 'factor-images'")
            images = [np.asarray(p, dtype=np.int64) for p in tau_spec["images"]]
            try:
                tau = G.FreeProductAut(gamma, g, images)
                gen_words = [gamma.parse(w)
                             for w in _need(lam_spec, "generators", "$.lambda")]
                lam_words = _close_words(gamma, gen_words)
                mp = matched_pair_from_twist(gamma, g, tau, lam_words, label=label)
            except G.GroupError as exc:
                raise ConfigError("$.tau", str(exc)) from exc
        return BicrossedConfigured(label, mp, lengths, params)
    if kind == "direct-sum-length":
        order = int(doc.get("factor_order", 2))
        if order < 2:
            raise ConfigError("$.factor_order", "factor order must be >= 2")
        return WeightedSumInstance(label, order, params)
    raise ConfigError("$.kind", f"unknown instance kind {kind!r}")


def _close_words(fp: G.FreeProduct, gens):
    words = {()}
    frontier = [()]
    while frontier:
        new = []
        for w in frontier:
            for s in gens:
                u = fp.multiply(w, s)
                if u not in words:
                    if len(words) > 512:
                        raise G.GroupError("lambda closure exceeds the finite bound")
                    words.add(u)
                    new.append(u)
        frontier = new
    return sorted(words, key=fp.sort_key)


def load_instance_file(path: str):
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ConfigError(path, f"cannot read instance file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(path, f"invalid JSON: {exc}") from exc
    return load_instance(doc)
