"""The ten acceptance criteria, each printing one PASS/FAIL line with its runtime."""
import math

import numpy as np

from noninertial.ahn import ahn_apply, ahn_trace_formula, side_by_side_report
from noninertial.channel import (ChannelSpec, apply_channel, choi_matrix, kraus_multiparty,
                                 truncation_tail)
from noninertial.dilation import oracle_compare
from noninertial.fock import basis_state
from noninertial.resource import (FreeStatePredicate, composition_check, contraction_check,
                                  convex_mixture_check, dilation_freeness_check, geometry_check,
                                  monotonicity_check, nrng_check, pad_state,
                                  tensor_composition_check)
from noninertial.states import random_state
from noninertial.sweep import SweepConfig, rows_to_csv, run_sweep, write_sweep

R_HALF = 0.881374  # tanh^2 r = 1/2 to six digits


def _trace_norm(m):
    return float(np.abs(np.linalg.eigvalsh(0.5 * (m + m.conj().T))).sum())


def test_01_identity_limit(criterion):
    c = criterion(1, "identity limit at r = 0")
    rng = np.random.default_rng(101)
    worst = 0.0
    for cutoffs in (None, 5):
        spec = ChannelSpec.build((2, 2), (1,), 0.0, cutoffs=cutoffs)
        ks = kraus_multiparty(spec)
        for _ in range(100):
            rho = random_state((2, 2), rng)
            out = apply_channel(ks, rho)
            embedded = pad_state(rho.data, (2, 2), spec.dims_out)
            worst = max(worst, _trace_norm(out.data - embedded))
    c.done(worst < 1e-12, f"max ||E(rho) - rho||_1 = {worst:.2e} (< 1e-12)", limit=5)


def test_02_trace_preservation(criterion):
    c = criterion(2, "certified trace deficit at tanh^2 r = 1/2, K = 40")
    tail1 = truncation_tail(R_HALF, 1, 40)
    rng = np.random.default_rng(102)
    worst = -np.inf
    for dims, acc in (((2,), (0,)), ((2, 2), (1,))):
        ks = kraus_multiparty(ChannelSpec.build(dims, acc, R_HALF, cutoffs=40))
        for _ in range(100):
            out = apply_channel(ks, random_state(dims, rng))
            worst = max(worst, 1.0 - out.trace())
    ks = kraus_multiparty(ChannelSpec.build((2,), (0,), R_HALF, cutoffs=40))
    fock_err = max(abs((1.0 - apply_channel(ks, basis_state(l, (2,))).trace())
                       - truncation_tail(R_HALF, l, 40)) for l in (0, 1))
    ok = worst <= tail1 and fock_err < 1e-14
    c.done(ok, f"max deficit {worst:.4e} <= tail(1,40) = {tail1:.4e}; "
               f"Fock |deficit - tail| = {fock_err:.1e} (< 1e-14)", limit=10)


def test_03_complete_positivity(criterion):
    c = criterion(3, "Choi matrix PSD, d = 2, K = 8")
    mins = []
    for r in (0.25, 0.5, R_HALF, 1.2):
        choi = choi_matrix(kraus_multiparty(ChannelSpec.build((2,), (0,), r, cutoffs=8)))
        mins.append(float(np.linalg.eigvalsh(choi.data).min()))
    c.done(min(mins) >= -1e-10, f"min eigenvalue {min(mins):.2e} (>= -1e-10)", limit=10)


def test_04_dilation_oracle(criterion):
    c = criterion(4, "Kraus channel equals isometry-then-trace")
    rng = np.random.default_rng(104)
    worst = 0.0
    for spec in (ChannelSpec.build((2, 2), (1,), 0.5),
                 ChannelSpec.build((2, 2), (0, 1), (0.3, 0.7))):
        for _ in range(50):
            worst = max(worst, oracle_compare(random_state((2, 2), rng), spec))
    c.done(worst < 1e-8, f"max trace distance {worst:.2e} (< 1e-8)", limit=60)


def test_05_vacuum_thermalization(criterion):
    c = criterion(5, "vacuum maps to a thermal state")
    r = math.atanh(math.sqrt(0.5))
    spec = ChannelSpec.build((2,), (0,), r)
    out = apply_channel(kraus_multiparty(spec), basis_state(0, (2,))).data
    K = spec.cutoffs[0]
    p = np.diag(out).real
    k = np.arange(len(p))
    expected = np.where(k <= K, 2.0 ** -(k + 1), 0.0)
    off = np.abs(out - np.diag(np.diag(out))).max()
    p_err = max(np.abs(p - expected).max(), off)
    mean_n = float(np.sum(k * p))
    n_err = abs(mean_n - math.sinh(r) ** 2)
    ok = p_err < 1e-10 and n_err < 1e-8
    c.done(ok, f"|p_k - 2^-(k+1)| <= {p_err:.1e}, <n> = {mean_n:.12f} (err {n_err:.1e})", limit=1)


def test_06_earlier_map_not_trace_preserving(criterion):
    c = criterion(6, "earlier Kraus family loses trace preservation on |Phi+>")
    r_sqrt2 = math.acosh(math.sqrt(2.0))
    grid = [0.2, 0.5, r_sqrt2, 1.2, 1.8]
    err = max(abs(ahn_apply(r).trace() - ahn_trace_formula(r)) for r in grid)
    at_sqrt2 = ahn_apply(r_sqrt2).trace()
    rows = [row for row in side_by_side_report(grid) if row["state"] == "bell-phi-plus"]
    flagged = all(row["verdict"] == "not trace preserving" for row in rows)
    tp = all(row["channel_deficit"] <= row["channel_tail_bound"] for row in rows)
    ok = (err < 1e-9 and abs(at_sqrt2 - 1.25) < 1e-9 and abs(ahn_trace_formula(r_sqrt2) - 1.25) < 1e-15
          and flagged and tp)
    c.done(ok, f"max |Tr - formula| = {err:.1e}; Tr at cosh r = sqrt2: {at_sqrt2:.12f}; "
               f"flagged {sum(row['verdict'] != 'trace preserving' for row in rows)}/{len(rows)}",
           limit=10)


def test_07_free_operation_suites(criterion):
    c = criterion(7, "NRNG and free-operation suites")
    inc = FreeStatePredicate("incoherent")
    ppt = FreeStatePredicate("ppt-separable", (1,))
    reports = []
    for r in (0.5, R_HALF):
        spec = ChannelSpec.build((2, 2), (1,), r)
        spec_b = ChannelSpec.build((2,), (0,), r)
        reports += [
            nrng_check(spec, inc, 500, seed=1),
            nrng_check(spec, ppt, 200, seed=2),
            dilation_freeness_check(spec, inc, 100, seed=3),
            dilation_freeness_check(spec, ppt, 50, seed=4),
            geometry_check(spec, inc, 100, seed=5),
            geometry_check(spec, ppt, 100, seed=6),
            composition_check(spec, "permutation", "both", inc, 100, seed=7),
            composition_check(spec, "local-free-op", "both", ppt, 100, seed=8),
        ]
        for p in (0.0, 0.5, 1.0):
            reports.append(convex_mixture_check(spec, "diagonal-unitary", p, inc, 100, seed=9))
        reports += [tensor_composition_check("full-dephasing", (2,), spec_b, inc, 100, seed=10),
                    tensor_composition_check("local-free-op", (2,), spec_b, ppt, 100, seed=11)]
    failed = [rep.property for rep in reports if not rep.passed]
    worst = max(rep.worst_violation for rep in reports)
    c.done(not failed, f"{len(reports)} suites, worst violation {worst:.1e} (<= 1e-9)"
                       + (f"; failed {failed}" if failed else ""), limit=120)


def test_08_monotonicity_and_contraction(criterion):
    c = criterion(8, "monotones never increase, distances contract")
    spec = ChannelSpec.build((2, 2), (1,), R_HALF)
    qubit = ChannelSpec.build((2,), (0,), 0.5)
    reports = [
        monotonicity_check(spec, "l1_coherence", "diagonal-unitary", 200, seed=1),
        monotonicity_check(spec, "relative_entropy_coherence", "permutation", 200, seed=2),
        monotonicity_check(spec, "negativity", "local-free-op", 200, seed=3),
        monotonicity_check(qubit, "robustness_coherence_qubit", None, 200, seed=4),
    ]
    reports += [contraction_check(spec, d, 200, seed=5)
                for d in ("trace", "bures", "relative-entropy", "hilbert-schmidt")]
    hs = reports[-1]
    failed = [rep.property for rep in reports if not rep.passed]
    worst = max(rep.worst_violation for rep in reports if rep.assertable)
    ok = not failed and not hs.assertable
    c.done(ok, f"worst violation {worst:.1e}; Hilbert-Schmidt report-only "
               f"(max increase {hs.details['max_increase']:.1e})"
               + (f"; failed {failed}" if failed else ""), limit=180)


def test_09_decay_phenomenology(criterion):
    c = criterion(9, "Bell-state resources decay with acceleration")
    cfg = SweepConfig(state="bell-phi-plus", r_min=0.0, r_max=2.0, r_count=6,
                      measures=["negativity", "l1_coherence"])
    rows = run_sweep(cfg)
    neg = [row["negativity"] for row in rows]
    l1 = [row["l1_coherence"] for row in rows]
    ok = (np.all(np.diff(neg) < 0) and np.all(np.diff(l1) < 0) and l1[-1] > 0
          and abs(neg[0] - 0.5) < 1e-12)
    c.done(ok, "negativity " + " > ".join(f"{v:.4f}" for v in neg)
           + "; l1 " + " > ".join(f"{v:.4f}" for v in l1), limit=120)


def test_10_determinism(criterion, tmp_path):
    c = criterion(10, "identical config and seed give byte-identical CSV")
    paths = []
    for i in range(2):
        cfg = SweepConfig(state="w3", accelerated=[0, 2], r_min=0.0, r_max=0.6, r_count=4,
                          measures=["negativity", "l1_coherence", "von_neumann_entropy"],
                          seed=7, output=str(tmp_path / f"run{i}.csv"))
        write_sweep(run_sweep(cfg), cfg)
        paths.append(tmp_path / f"run{i}.csv")
    a, b = (p.read_bytes() for p in paths)
    same = a == b and rows_to_csv(run_sweep(cfg), cfg.measures).encode() == a
    c.done(same, f"{len(a)} bytes, identical: {same}", limit=60)
