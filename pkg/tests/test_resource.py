import numpy as np
import pytest

from noninertial.channel import ChannelSpec, apply_channel, kraus_multiparty
from noninertial.errors import UnsupportedDimensionError
from noninertial.fock import DensityMatrix
from noninertial.measures import l1_coherence, robustness_coherence_qubit
from noninertial.resource import (FREE_OP_KINDS, FreeStatePredicate, composition_check,
                                  contraction_check, convex_mixture_check,
                                  dilation_freeness_check, free_operation, free_state_sampler,
                                  geometry_check, hadamard_on_levels, monotonicity_check,
                                  nrng_check, pad_state, robustness_block_bound,
                                  tensor_composition_check)
from noninertial.states import bell_phi_plus, random_state

SPEC = ChannelSpec.build((2, 2), (1,), 0.7)
INC = FreeStatePredicate("incoherent")
PPT = FreeStatePredicate("ppt-separable", (1,))


def test_predicates():
    assert not INC.holds(bell_phi_plus())
    assert not PPT.holds(bell_phi_plus())
    assert PPT.holds(DensityMatrix(np.eye(4) / 4, (2, 2)))
    assert INC.residual(bell_phi_plus()) == pytest.approx(0.5)
    assert PPT.exact_for((2, 3)) and not PPT.exact_for((2, 4))
    with pytest.raises(ValueError):
        FreeStatePredicate("ppt-separable")
    with pytest.raises(ValueError):
        FreeStatePredicate("nope")


def test_predicate_renormalizes():
    rho = DensityMatrix(0.5 * np.eye(4) / 4, (2, 2))
    assert PPT.residual(rho) == 0.0


@pytest.mark.parametrize("pred", [INC, PPT])
@pytest.mark.parametrize("pure", [False, True])
def test_sampler_stays_free(pred, pure):
    samples = free_state_sampler(pred, (2, 3), 20, seed=1, pure=pure)
    assert len(samples) == 20
    for s in samples:
        s.check()
        assert pred.holds(s)
        if pure:
            assert np.vdot(s.data, s.data).real == pytest.approx(1.0)


def test_sampler_errors():
    with pytest.raises(ValueError):
        free_state_sampler(INC, (2,), 0, seed=0)
    with pytest.raises(UnsupportedDimensionError):
        free_state_sampler(PPT, (2,), 1, seed=0)


@pytest.mark.parametrize("kind", FREE_OP_KINDS)
def test_free_operations_are_trace_preserving(kind):
    op = free_operation(kind, (2, 3), seed=3)
    total = sum(k.conj().T @ k for k in op.kraus)
    assert np.allclose(total, np.eye(6))


def test_registration_rejects_resource_generating_map():
    op = free_operation("identity", (2, 2))
    op.kraus = [np.kron(np.eye(2), hadamard_on_levels(2))]
    with pytest.raises(ValueError):
        op.register(INC)
    with pytest.raises(ValueError):
        free_operation("nope", (2,))


def test_pad_state():
    rho = random_state((2, 2), np.random.default_rng(0))
    padded = pad_state(rho.data, (2, 2), (3, 4))
    t = padded.reshape(3, 4, 3, 4)
    assert np.allclose(t[:2, :2, :2, :2].reshape(4, 4), rho.data)
    assert np.trace(padded) == pytest.approx(1.0)


def test_nrng_checks():
    assert nrng_check(SPEC, INC, 50).passed
    rep = nrng_check(SPEC, PPT, 30)
    assert rep.passed
    assert any("necessary only" in n for n in rep.notes)


def test_dilation_freeness_passes_and_isolates_failures():
    rep = dilation_freeness_check(SPEC, INC, 20)
    assert rep.passed
    assert rep.parts[1].details["min_reduced_purity"] < 1.0
    u = np.kron(np.eye(2), hadamard_on_levels(SPEC.dims_out[1]))
    bad = dilation_freeness_check(SPEC, INC, 20, post_unitary=u)
    assert not bad.passed
    assert not bad.parts[0].passed and bad.parts[1].passed
    assert any("partial trace" in n for n in bad.notes)


def test_geometry_and_compositions():
    assert geometry_check(SPEC, INC, 30).passed
    assert geometry_check(SPEC, PPT, 30, p=0.3).passed
    for kind in ("diagonal-unitary", "permutation", "full-dephasing"):
        assert composition_check(SPEC, kind, "both", INC, 20).passed
    assert composition_check(SPEC, "local-free-op", "pre", PPT, 20).passed
    with pytest.raises(ValueError):
        composition_check(SPEC, "identity", "sideways", INC, 1)


@pytest.mark.parametrize("p", [0.0, 0.5, 1.0])
def test_convex_mixture(p):
    rep = convex_mixture_check(SPEC, "permutation", p, INC, 20)
    assert rep.passed
    assert "zero-padding" in " ".join(rep.notes)
    with pytest.raises(ValueError):
        convex_mixture_check(SPEC, "permutation", 1.5, INC, 1)


def test_tensor_composition():
    spec_b = ChannelSpec.build((2,), (0,), 0.5)
    assert tensor_composition_check("diagonal-unitary", (2,), spec_b, INC, 20).passed
    assert tensor_composition_check("local-free-op", (2,), spec_b, PPT, 20).passed
    with pytest.raises(ValueError):
        tensor_composition_check("identity", (2,), SPEC, INC, 1)


@pytest.mark.parametrize("quantifier,free_op", [
    ("l1_coherence", None), ("l1_coherence", "permutation"),
    ("relative_entropy_coherence", "full-dephasing"), ("negativity", "local-free-op")])
def test_monotonicity(quantifier, free_op):
    rep = monotonicity_check(SPEC, quantifier, free_op, n=30)
    assert rep.passed
    assert rep.parts[0].details["max_increase"] <= 1e-9


def test_robustness_monotonicity():
    spec = ChannelSpec.build((2,), (0,), 0.4)
    assert monotonicity_check(spec, "robustness_coherence_qubit", None, n=10).passed
    with pytest.raises(UnsupportedDimensionError):
        monotonicity_check(SPEC, "robustness_coherence_qubit", None, n=1)
    with pytest.raises(UnsupportedDimensionError):
        monotonicity_check(spec, "negativity", None, n=1)


def _robustness_sdp(rho):
    cp = pytest.importorskip("cvxpy")
    d = rho.shape[0]
    tau = cp.Variable((d, d), hermitian=True)
    delta = cp.Variable(d, nonneg=True)
    cons = [tau >> 0, rho + tau == cp.diag(delta)]
    prob = cp.Problem(cp.Minimize(cp.real(cp.trace(tau))), cons)
    prob.solve(solver="CLARABEL")
    return prob.value


def test_block_bound_dominates_sdp_optimum():
    spec = ChannelSpec.build((2,), (0,), 0.4, cutoffs=4)
    ks = kraus_multiparty(spec)
    rng = np.random.default_rng(2)
    for _ in range(4):
        rho = random_state((2,), rng)
        out = apply_channel(ks, rho).data
        exact = _robustness_sdp(out / np.trace(out).real)
        bound = robustness_block_bound(ks, rho)
        assert bound >= exact - 1e-6
        # and the bound itself never exceeds the input robustness
        assert bound <= robustness_coherence_qubit(rho.data) + 1e-9


def test_monotonicity_on_diagonal_inputs_is_flat():
    diag = [DensityMatrix(np.diag(p).astype(complex), (2, 2))
            for p in np.random.default_rng(0).dirichlet(np.ones(4), size=5)]
    rep = monotonicity_check(SPEC, "l1_coherence", None, states=diag, decompositions=0)
    assert rep.parts[0].details["max_increase"] == 0.0
    assert l1_coherence(diag[0]) == 0


@pytest.mark.parametrize("distance", ["trace", "bures", "relative-entropy"])
def test_contraction(distance):
    rep = contraction_check(SPEC, distance, n=30)
    assert rep.passed and rep.assertable


def test_hilbert_schmidt_is_report_only():
    rep = contraction_check(SPEC, "hilbert-schmidt", n=10)
    assert not rep.assertable and rep.passed
    assert rep.line().startswith("[INFO]")
    with pytest.raises(ValueError):
        contraction_check(SPEC, "nope", n=1)
