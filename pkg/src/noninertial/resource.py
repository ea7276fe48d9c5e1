"""Free-state predicates, free operations and the property suites built on them.

Channel outputs are renormalized by their recorded trace before any
predicate or quantifier is evaluated, so truncation loss is never mistaken
for resource generation.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .channel import ChannelSpec, KrausSet, apply_channel, kraus_multiparty
from .dilation import dilate_and_trace, isometry
from .errors import DimensionError, UnsupportedDimensionError
from .fock import DensityMatrix, as_dims, partial_trace
from .measures import (DISTANCES, l1_coherence, min_pt_eigenvalue, negativity,
                       relative_entropy_coherence, robustness_coherence_qubit)
from .report import PropertyReport, merge
from .states import haar_vector, random_mixed, random_state, random_unitary

DEFAULT_TOL = 1e-9


@dataclass(frozen=True)
class FreeStatePredicate:
    """``incoherent`` (diagonal in the Fock basis) or ``ppt-separable`` across a cut.

    For ``ppt-separable``, ``bipartition`` lists the subsystems on the
    transposed side.
    """

    name: str
    bipartition: tuple[int, ...] | None = None
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        if self.name not in ("incoherent", "ppt-separable"):
            raise ValueError(f"unknown predicate {self.name!r}")
        if self.name == "ppt-separable":
            if not self.bipartition:
                raise ValueError("ppt-separable needs a bipartition")
            object.__setattr__(self, "bipartition", tuple(self.bipartition))

    def residual(self, rho: DensityMatrix) -> float:
        """How far a (renormalized) state is from the free set; 0 when inside."""
        data = rho.data / np.trace(rho.data).real
        if self.name == "incoherent":
            off = data - np.diag(np.diag(data))
            return float(np.abs(off).max(initial=0.0))
        return max(0.0, -min_pt_eigenvalue(DensityMatrix(data, rho.dims), self.bipartition))

    def holds(self, rho: DensityMatrix) -> bool:
        return self.residual(rho) <= self.tol

    def exact_for(self, dims) -> bool:
        """Whether PPT is also sufficient for separability on ``dims`` (2x2 and 2x3 only)."""
        if self.name == "incoherent":
            return True
        b = int(np.prod([dims[i] for i in self.bipartition]))
        a = int(np.prod(dims)) // b
        return sorted((a, b)) in ([2, 2], [2, 3])

    def scope_note(self, dims) -> list[str]:
        if self.exact_for(dims):
            return []
        return [f"PPT (necessary only) on dims {tuple(dims)}"]


def free_state_sampler(pred: FreeStatePredicate, dims, n: int, seed: int,
                       pure: bool = False) -> list[DensityMatrix]:
    """``n`` states inside the free set by construction.

    Incoherent: random diagonals (random Fock projectors when ``pure``).
    Separable: random convex mixtures of product states (single products when ``pure``).
    """
    if n < 1:
        raise ValueError("need n >= 1 samples")
    dims = as_dims(dims)
    side = int(np.prod(dims))
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(n):
        if pred.name == "incoherent":
            if pure:
                p = np.zeros(side)
                p[rng.integers(side)] = 1.0
            else:
                p = rng.dirichlet(np.ones(side))
            out.append(DensityMatrix(np.diag(p).astype(complex), dims))
            continue
        if len(dims) < 2:
            raise UnsupportedDimensionError("separable sampling needs at least two subsystems")
        terms = 1 if pure else int(rng.integers(1, 5))
        weights = rng.dirichlet(np.ones(terms))
        data = np.zeros((side, side), dtype=complex)
        for w in weights:
            if pure:
                vec = np.array([1.0 + 0j])
                for d in dims:
                    vec = np.kron(vec, haar_vector(d, rng))
                prod = np.outer(vec, vec.conj())
            else:
                prod = np.array([[1.0 + 0j]])
                for d in dims:
                    prod = np.kron(prod, random_mixed((d,), rng).data)
            data += w * prod
        out.append(DensityMatrix(data, dims))
    return out


FREE_OP_KINDS = ("identity", "diagonal-unitary", "permutation", "full-dephasing", "local-free-op")


@dataclass
class FreeOperation:
    """Kraus form of a free operation on a fixed signature."""

    kind: str
    dims: tuple[int, ...]
    kraus: list[np.ndarray]
    notes: list[str] = field(default_factory=list)

    def apply(self, rho: DensityMatrix) -> DensityMatrix:
        if tuple(rho.dims) != self.dims:
            raise DimensionError(f"free op on {self.dims} applied to state on {rho.dims}")
        data = sum(k @ rho.data @ k.conj().T for k in self.kraus)
        return DensityMatrix(data, self.dims, rho.trace_deficit)

    def register(self, pred: FreeStatePredicate, n: int = 50, seed: int = 12345) -> "FreeOperation":
        """Confirm by sampling that the operation keeps ``pred``'s free set; raise otherwise."""
        worst = max(pred.residual(self.apply(s))
                    for s in free_state_sampler(pred, self.dims, n, seed))
        if worst > pred.tol:
            raise ValueError(f"{self.kind} does not preserve the {pred.name} free set "
                             f"(residual {worst:.2e})")
        return self


def free_operation(kind: str, dims, seed: int = 0) -> FreeOperation:
    dims = as_dims(dims)
    side = int(np.prod(dims))
    rng = np.random.default_rng(seed)
    if kind == "identity":
        kraus = [np.eye(side, dtype=complex)]
    elif kind == "diagonal-unitary":
        kraus = [np.diag(np.exp(1j * rng.uniform(0, 2 * np.pi, side)))]
    elif kind == "permutation":
        kraus = [np.eye(side, dtype=complex)[rng.permutation(side)]]
    elif kind == "full-dephasing":
        kraus = []
        for i in range(side):
            k = np.zeros((side, side), dtype=complex)
            k[i, i] = 1.0
            kraus.append(k)
    elif kind == "local-free-op":
        # random mixture of product unitaries
        weights = rng.dirichlet(np.ones(3))
        kraus = []
        for w in weights:
            u = np.array([[1.0 + 0j]])
            for d in dims:
                u = np.kron(u, random_unitary(d, rng))
            kraus.append(math.sqrt(w) * u)
    else:
        raise ValueError(f"unknown free operation {kind!r}; choose from {FREE_OP_KINDS}")
    return FreeOperation(kind, dims, kraus)


def _normalized(rho: DensityMatrix) -> DensityMatrix:
    return DensityMatrix(rho.data / rho.trace(), rho.dims)


def _trace_norm(mat: np.ndarray) -> float:
    return float(np.abs(np.linalg.eigvalsh(0.5 * (mat + mat.conj().T))).sum())


def nrng_check(spec: ChannelSpec, pred: FreeStatePredicate, n: int = 100, seed: int = 0,
               ks: KrausSet | None = None) -> PropertyReport:
    """E(free) inside free: worst predicate residual over ``n`` sampled free inputs."""
    ks = kraus_multiparty(spec) if ks is None else ks
    worst = 0.0
    for rho in free_state_sampler(pred, spec.local_dims, n, seed):
        worst = max(worst, pred.residual(apply_channel(ks, rho)))
    return PropertyReport(f"nrng[{pred.name}]", n, worst, pred.tol, seed,
                          notes=pred.scope_note(spec.dims_out),
                          details={"r": list(spec.r), "cutoffs": list(spec.cutoffs)})


def hadamard_on_levels(dim: int) -> np.ndarray:
    """Unitary mixing Fock levels 0 and 1, identity above; not a free operation."""
    u = np.eye(dim, dtype=complex)
    u[:2, :2] = np.array([[1, 1], [1, -1]]) / math.sqrt(2)
    return u


def dilation_freeness_check(spec: ChannelSpec, pred: FreeStatePredicate, n: int = 50, seed: int = 0,
                   post_unitary: np.ndarray | None = None) -> PropertyReport:
    """Freeness through the dilation pipeline, and purity of the global dilated state.

    Part (a) applies isometry-then-trace (optionally followed by
    ``post_unitary`` on the output) to free states.  Part (b) checks that
    before the trace a pure free input stays pure, so any loss of freeness
    can only enter through the partial trace.
    """
    worst_a = 0.0
    for rho in free_state_sampler(pred, spec.local_dims, n, seed):
        out = dilate_and_trace(rho, spec)
        if post_unitary is not None:
            out = DensityMatrix(post_unitary @ out.data @ post_unitary.conj().T, out.dims)
        worst_a = max(worst_a, pred.residual(out))
    w = isometry(spec)
    wm = w.reshape(-1, w.shape[2])
    gram = wm.conj().T @ wm
    worst_b = 0.0
    reduced = []
    for rho in free_state_sampler(pred, spec.local_dims, n, seed + 1, pure=True):
        rg = rho.data @ gram
        global_purity = np.trace(rg @ rg).real / np.trace(rg).real ** 2
        worst_b = max(worst_b, abs(1.0 - global_purity))
        out = _normalized(dilate_and_trace(rho, spec))
        reduced.append(float(np.vdot(out.data, out.data).real))
    parts = [
        PropertyReport("dilation_freeness.freeness", n, worst_a, pred.tol, seed,
                       notes=pred.scope_note(spec.dims_out)),
        PropertyReport("dilation_freeness.global_purity", n, worst_b, 1e-10, seed,
                       details={"min_reduced_purity": min(reduced)}),
    ]
    report = merge(f"dilation_freeness[{pred.name}]", parts, seed)
    if not parts[0].passed and parts[1].passed:
        report.notes.append("freeness lost only after the partial trace; dilated state stays pure")
    return report


def geometry_check(spec: ChannelSpec, pred: FreeStatePredicate, n: int = 100, seed: int = 0,
                   p: float | None = None) -> PropertyReport:
    """Images of convex mixtures of free states are free and equal the mixed images."""
    ks = kraus_multiparty(spec)
    rng = np.random.default_rng(seed + 7)
    first = free_state_sampler(pred, spec.local_dims, n, seed)
    second = free_state_sampler(pred, spec.local_dims, n, seed + 1)
    worst_free = worst_lin = 0.0
    for r1, r2 in zip(first, second):
        q = rng.random() if p is None else p
        mix = DensityMatrix(q * r1.data + (1 - q) * r2.data, r1.dims)
        out = apply_channel(ks, mix)
        worst_free = max(worst_free, pred.residual(out))
        lin = out.data - q * apply_channel(ks, r1).data - (1 - q) * apply_channel(ks, r2).data
        worst_lin = max(worst_lin, _trace_norm(lin))
    parts = [PropertyReport("geometry.freeness", n, worst_free, pred.tol, seed,
                            notes=pred.scope_note(spec.dims_out)),
             PropertyReport("geometry.linearity", n, worst_lin, 1e-12, seed)]
    return merge(f"geometry[{pred.name}]", parts, seed)


def _free_op_for(kind: str, dims, pred: FreeStatePredicate, seed: int) -> FreeOperation:
    return free_operation(kind, dims, seed).register(pred)


def composition_check(spec: ChannelSpec, free_op: str, order: str, pred: FreeStatePredicate,
                      n: int = 100, seed: int = 0) -> PropertyReport:
    """Phi after E (``post``), E after Phi (``pre``) or both keep free states free."""
    if order not in ("pre", "post", "both"):
        raise ValueError("order must be 'pre', 'post' or 'both'")
    ks = kraus_multiparty(spec)
    parts = []
    for o in (("pre", "post") if order == "both" else (order,)):
        dims = spec.local_dims if o == "pre" else spec.dims_out
        phi = _free_op_for(free_op, dims, pred, seed)
        worst = 0.0
        for rho in free_state_sampler(pred, spec.local_dims, n, seed):
            out = apply_channel(ks, phi.apply(rho)) if o == "pre" else phi.apply(apply_channel(ks, rho))
            worst = max(worst, pred.residual(out))
        parts.append(PropertyReport(f"composition.{o}", n, worst, pred.tol, seed,
                                    notes=pred.scope_note(spec.dims_out)))
    return merge(f"composition[{free_op},{pred.name}]", parts, seed)


def pad_state(data: np.ndarray, dims, dims_out) -> np.ndarray:
    """Zero-padding isometry: each subsystem's levels embedded as the lowest levels of a larger space."""
    dims, dims_out = tuple(dims), tuple(dims_out)
    t = data.reshape(dims * 2)
    widths = [(0, o - i) for i, o in zip(dims, dims_out)] * 2
    side = int(np.prod(dims_out))
    return np.pad(t, widths).reshape(side, side)


def convex_mixture_check(spec: ChannelSpec, free_op: str, p: float, pred: FreeStatePredicate,
                         n: int = 100, seed: int = 0) -> PropertyReport:
    """``p E + (1-p) V Phi(.) V^dag`` is CPTP within the truncation budget and keeps free states free.

    The embedding V is zero-padding of every accelerated party's levels.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    ks = kraus_multiparty(spec)
    phi = _free_op_for(free_op, spec.local_dims, pred, seed)
    completeness = p * ks.completeness + (1 - p) * np.eye(len(ks.completeness))
    defect = float(np.abs(completeness - np.eye(len(completeness))).max())
    worst = 0.0
    for rho in free_state_sampler(pred, spec.local_dims, n, seed):
        data = p * apply_channel(ks, rho).data
        data = data + (1 - p) * pad_state(phi.apply(rho).data, spec.local_dims, spec.dims_out)
        worst = max(worst, pred.residual(DensityMatrix(data, spec.dims_out)))
    budget = spec.tail_bound() + 1e-12
    parts = [PropertyReport("convex_mixture.freeness", n, worst, pred.tol, seed,
                            notes=pred.scope_note(spec.dims_out)),
             PropertyReport("convex_mixture.completeness", 1, defect, budget, seed)]
    report = merge(f"convex_mixture[{free_op},p={p:g},{pred.name}]", parts, seed)
    report.notes.append("embedding isometry: zero-padding")
    return report


def tensor_composition_check(free_op: str, dims_a, spec_b: ChannelSpec,
                             pred_joint: FreeStatePredicate, n: int = 100,
                             seed: int = 0) -> PropertyReport:
    """``Phi_A (x) E_B`` on joint free states, plus the marginal closure condition."""
    dims_a = as_dims(dims_a)
    if spec_b.n_parties != 1:
        raise ValueError("spec_b must describe the single accelerated party B")
    na = len(dims_a)
    joint = ChannelSpec(dims_a + spec_b.local_dims, (na,), spec_b.r, spec_b.cutoffs)
    ks = kraus_multiparty(joint)
    marginal_pred_a = FreeStatePredicate("incoherent", tol=pred_joint.tol) \
        if pred_joint.name == "incoherent" else None
    phi = free_operation(free_op, dims_a, seed)
    if marginal_pred_a is not None:
        phi.register(marginal_pred_a)
    phi_joint = [np.kron(k, np.eye(joint.dims_out[na])) for k in phi.kraus]
    worst = closure = 0.0
    for rho in free_state_sampler(pred_joint, joint.local_dims, n, seed):
        out = apply_channel(ks, rho)
        out = DensityMatrix(sum(k @ out.data @ k.conj().T for k in phi_joint), out.dims)
        worst = max(worst, pred_joint.residual(out))
        if pred_joint.name == "incoherent":
            for keep in (list(range(na)), [na]):
                closure = max(closure, marginal_pred_a.residual(partial_trace(rho, keep)))
    parts = [PropertyReport("tensor.freeness", n, worst, pred_joint.tol, seed,
                            notes=pred_joint.scope_note(joint.dims_out)),
             PropertyReport("tensor.closure", n, closure, pred_joint.tol, seed,
                            notes=[] if pred_joint.name == "incoherent" else
                            ["single-party marginals are trivially separable"])]
    return merge(f"tensor[{free_op},{pred_joint.name}]", parts, seed)


def robustness_block_bound(ks: KrausSet, rho: DensityMatrix) -> float:
    """Feasible-point upper bound on the generalized robustness of coherence of E(rho).

    For a single accelerated qubit each term ``A_k rho A_k^dag`` lives on
    levels {k, k+1}.  Convexity of the robustness splits E(rho) into these
    two-level blocks; each block's qubit optimum embeds as a feasible noise
    state of the large problem, so the weighted sum bounds R(E(rho)) from above.
    """
    if ks.dims_in != (2,):
        raise UnsupportedDimensionError("block bound needs a single accelerated qubit")
    total = 0.0
    bound = 0.0
    for k, op in enumerate(ks.ops):
        block = op.data @ rho.data @ op.data.conj().T
        sub = block[k:k + 2, k:k + 2]
        if np.abs(block).sum() - np.abs(sub).sum() > 1e-13:
            raise RuntimeError("Kraus term leaves the two-level block")
        w = np.trace(sub).real
        total += w
        if w > 0:
            bound += w * robustness_coherence_qubit(sub / w)
    return bound / total


QUANTIFIERS = ("l1_coherence", "relative_entropy_coherence", "negativity",
               "robustness_coherence_qubit")


def monotonicity_check(spec: ChannelSpec, quantifier: str, free_op: str | None = None,
                       n: int = 100, seed: int = 0, bipartition=None,
                       decompositions: int | None = None, states=None) -> PropertyReport:
    """Q(E o Phi(rho)) <= Q(rho) and Q(E o Phi(sum p_i rho_i)) <= sum p_i Q(rho_i).

    Robustness is only evaluated for a single accelerated qubit, on the
    output through :func:`robustness_block_bound`.
    """
    if quantifier not in QUANTIFIERS:
        raise ValueError(f"unknown quantifier {quantifier!r}")
    ks = kraus_multiparty(spec)
    if quantifier == "negativity":
        if spec.n_parties < 2:
            raise UnsupportedDimensionError("negativity needs at least two parties")
        part = tuple(bipartition) if bipartition is not None else (spec.accelerated[0],)
        pred = FreeStatePredicate("ppt-separable", part)

        def q_in(rho):
            return negativity(rho, part)
        q_out = q_in
    elif quantifier == "robustness_coherence_qubit":
        if spec.local_dims != (2,):
            raise UnsupportedDimensionError("robustness monotonicity needs one accelerated qubit")
        pred = FreeStatePredicate("incoherent")

        def q_in(rho):
            return robustness_coherence_qubit(rho.data / rho.trace())

        def q_out(rho_in):
            return robustness_block_bound(ks, rho_in)
    else:
        pred = FreeStatePredicate("incoherent")
        fn = l1_coherence if quantifier == "l1_coherence" else relative_entropy_coherence

        def q_in(rho):
            return fn(rho)
        q_out = q_in

    phi = _free_op_for(free_op, spec.local_dims, pred, seed) if free_op else None
    rng = np.random.default_rng(seed)

    def evolve(rho):
        pre = phi.apply(rho) if phi else rho
        if quantifier == "robustness_coherence_qubit":
            return pre
        return _normalized(apply_channel(ks, pre))

    if states is None:
        states = [random_state(spec.local_dims, rng) for _ in range(n)]
    worst_single = -np.inf
    for rho in states:
        before = q_in(rho)
        after = q_out(evolve(rho))
        worst_single = max(worst_single, after - before)
    worst_mix = -np.inf
    n_dec = len(states) if decompositions is None else decompositions
    for _ in range(n_dec):
        m = int(rng.integers(2, 5))
        parts = [random_state(spec.local_dims, rng) for _ in range(m)]
        w = rng.dirichlet(np.ones(m))
        mix = DensityMatrix(sum(wi * r.data for wi, r in zip(w, parts)), spec.local_dims)
        worst_mix = max(worst_mix, q_out(evolve(mix)) - sum(wi * q_in(r) for wi, r in zip(w, parts)))
    parts = [PropertyReport(f"monotone.{quantifier}.single", len(states), max(worst_single, 0.0),
                            DEFAULT_TOL, seed, details={"max_increase": float(worst_single)}),
             PropertyReport(f"monotone.{quantifier}.convex", n_dec, max(worst_mix, 0.0),
                            DEFAULT_TOL, seed, details={"max_increase": float(worst_mix)})]
    report = merge(f"monotone[{quantifier}]", parts, seed)
    if quantifier == "robustness_coherence_qubit":
        report.notes.append("output robustness bounded above by two-level block decomposition")
    return report


def contraction_check(spec: ChannelSpec, distance: str, n: int = 100, seed: int = 0,
                      tol: float = 1e-10) -> PropertyReport:
    """D(E rho, E sigma) <= D(rho, sigma); Hilbert-Schmidt is recorded but never asserted."""
    if distance not in DISTANCES:
        raise ValueError(f"unknown distance {distance!r}; choose from {sorted(DISTANCES)}")
    dist = DISTANCES[distance]
    ks = kraus_multiparty(spec)
    rng = np.random.default_rng(seed)
    worst = -np.inf
    ratio = 0.0
    for _ in range(n):
        rho = random_state(spec.local_dims, rng)
        sigma = random_mixed(spec.local_dims, rng)
        before = dist(rho, sigma)
        after = dist(_normalized(apply_channel(ks, rho)), _normalized(apply_channel(ks, sigma)))
        worst = max(worst, after - before)
        if before > 0:
            ratio = max(ratio, after / before)
    report = PropertyReport(f"contraction[{distance}]", n, max(worst, 0.0), tol, seed,
                            assertable=distance != "hilbert-schmidt",
                            details={"max_increase": float(worst), "max_ratio": float(ratio)})
    if distance == "hilbert-schmidt":
        report.notes.append("report-only: Hilbert-Schmidt distance is not contractive in general")
    return report
