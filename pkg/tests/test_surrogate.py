import json
from pathlib import Path

import numpy as np
import pytest

from beadshape.contour import is_simple, signed_area
from beadshape.exceptions import DomainError
from beadshape.features import extract
from beadshape.params import PARAM_BOUNDS, PrintParams, to_dimensionless
from beadshape.surrogate import (
    SPLIT_RATIOS,
    SurrogateConfig,
    _split_counts,
    bead_geometry,
    build_dataset,
    lhs_sample,
    load_dataset,
    split_arrays,
    surrogate_contour,
)

N1 = PrintParams(rho=2100, mu=10, tau0=630, phi_n=25, h_n=12, v_p=40, u_f=40.5)
BUCKLER = PrintParams(rho=2100, mu=10, tau0=630, phi_n=10, h_n=30, v_p=20, u_f=40)


def test_lhs_fills_every_stratum():
    n = 10
    draws = lhs_sample(n, seed=11)
    assert len(draws) == n
    for name, (lo, hi) in PARAM_BOUNDS.items():
        vals = np.array([getattr(p, name) for p in draws])
        strata = np.floor((vals - lo) / (hi - lo) * n).astype(int)
        assert sorted(strata) == list(range(n))


def test_lhs_single_sample_and_determinism():
    one = lhs_sample(1, seed=2)
    assert len(one) == 1
    a = lhs_sample(20, seed=5)
    b = lhs_sample(20, seed=5)
    assert a == b
    c = lhs_sample(20, seed=6)
    assert a != c


def test_lhs_collapsed_bounds():
    bounds = dict(PARAM_BOUNDS)
    bounds["rho"] = (2200.0, 2200.0)
    draws = lhs_sample(5, bounds=bounds, seed=0)
    assert all(p.rho == 2200.0 for p in draws)


def test_lhs_input_validation():
    with pytest.raises(DomainError):
        lhs_sample(0)
    with pytest.raises(DomainError):
        lhs_sample(5, bounds={"rho": (2000, 2500)})
    bad = dict(PARAM_BOUNDS)
    bad["mu"] = (30.0, 1.0)
    with pytest.raises(DomainError):
        lhs_sample(5, bounds=bad)


def test_bead_area_mass_conservation():
    # v* = 1 and a 20 mm nozzle give area pi * 20^2 / 4 = 100 pi
    p = PrintParams(rho=2100, mu=10, tau0=630, phi_n=20, h_n=15, v_p=50, u_f=50)
    geom = bead_geometry(p)
    assert geom.area == pytest.approx(100.0 * np.pi, rel=1e-12)
    pts = surrogate_contour(p)
    assert abs(signed_area(pts)) == pytest.approx(geom.area, rel=1e-12)


def test_bead_height_clamped_by_standoff():
    squat = PrintParams(rho=2100, mu=10, tau0=1500, phi_n=25, h_n=12, v_p=10, u_f=50)
    geom = bead_geometry(squat)
    d_eq = np.sqrt(4.0 * geom.area / np.pi)
    tau = to_dimensionless(squat).tau0_star
    assert d_eq * tau / (1.0 + tau) > squat.h_n
    assert geom.height == squat.h_n
    pts = surrogate_contour(squat)
    assert pts[:, 1].max() == pytest.approx(squat.h_n, rel=1e-12)


def test_bead_area_monotone_in_speed_ratio():
    areas = []
    for v_p in (20.0, 40.0, 80.0):
        p = PrintParams(rho=2100, mu=10, tau0=630, phi_n=25, h_n=12, v_p=v_p, u_f=40)
        areas.append(bead_geometry(p).area)
    assert areas[0] > areas[1] > areas[2]


def test_bead_exponent_band():
    for tau0 in (100.0, 630.0, 1500.0):
        p = PrintParams(rho=2100, mu=10, tau0=tau0, phi_n=25, h_n=12, v_p=40, u_f=40)
        assert 2.0 < bead_geometry(p).exponent < 4.0


@pytest.mark.parametrize("layers", [1, 2])
def test_contour_invariants(layers):
    pts = surrogate_contour(N1, layers=layers)
    assert is_simple(pts)
    assert pts[:, 1].min() == 0.0
    assert pts[0, 0] == 0.0                      # crown on the symmetry axis
    # mirror symmetry vertex by vertex
    assert np.allclose(pts[1:, 0], -pts[:0:-1, 0], atol=1e-12)
    assert np.allclose(pts[1:, 1], pts[:0:-1, 1], atol=1e-12)
    # clockwise walk from the crown
    assert signed_area(pts) < 0.0


def test_two_layer_stack_height_and_pinch():
    geom = bead_geometry(N1)
    pts = surrogate_contour(N1, layers=2)
    cfg = SurrogateConfig()
    expected = (1.0 + cfg.stack_penetration) * geom.height
    assert pts[:, 1].max() == pytest.approx(expected, rel=1e-12)
    fo = extract(pts, layers=2)
    assert fo.pinch is not None
    # the waist sits between the top bead's base and the bottom crown
    assert cfg.stack_penetration * geom.height < fo.pinch[1] < geom.height


def test_unprintable_combination_names_mode():
    with pytest.raises(DomainError, match="buckling"):
        surrogate_contour(BUCKLER)


def test_layers_validation():
    with pytest.raises(DomainError):
        surrogate_contour(N1, layers=3)


def test_surrogate_config_validation():
    with pytest.raises(DomainError):
        SurrogateConfig(top_width_scale=1.5)
    with pytest.raises(DomainError):
        SurrogateConfig(stack_penetration=1.0)
    with pytest.raises(DomainError):
        SurrogateConfig(flank_points=4)


def test_split_counts_proportional():
    assert _split_counts(184, SPLIT_RATIOS[1]) == [154, 14, 16]
    assert _split_counts(172, SPLIT_RATIOS[2]) == [154, 12, 6]
    for n in (10, 22, 97, 184):
        counts = _split_counts(n, SPLIT_RATIOS[1])
        assert sum(counts) == n
        assert all(c >= 0 for c in counts)


def test_build_dataset_manifest(tiny_dataset_dir, tiny_manifest):
    m = tiny_manifest
    assert m["format_version"] == 1
    assert m["layers"] == 1
    assert m["n_printable"] == len(m["records"])
    assert m["n_printable"] + sum(m["dropped"].values()) >= m["n_requested"] \
        or not m["dropped"]
    counts = m["split_counts"]
    assert sum(counts.values()) == m["n_printable"]
    from_split_field = {s: sum(r["split"] == s for r in m["records"])
                        for s in counts}
    assert from_split_field == counts
    # every record's contour file exists and loads
    for rec in m["records"]:
        assert (Path(tiny_dataset_dir) / rec["contour_file"]).exists()
        assert rec["contour"].shape[1] == 2


def test_build_dataset_deterministic(tmp_path):
    a = tmp_path / "a"
    b = tmp_path / "b"
    build_dataset(str(a), n=12, seed=9)
    build_dataset(str(b), n=12, seed=9)
    assert (a / "manifest.json").read_bytes() == (b / "manifest.json").read_bytes()
    first = json.loads((a / "manifest.json").read_text())["records"][0]["contour_file"]
    assert (a / first).read_bytes() == (b / first).read_bytes()


def test_build_dataset_seed_changes_output(tmp_path):
    a = tmp_path / "a"
    b = tmp_path / "b"
    build_dataset(str(a), n=12, seed=1)
    build_dataset(str(b), n=12, seed=2)
    assert (a / "manifest.json").read_bytes() != (b / "manifest.json").read_bytes()


def test_build_dataset_rejects_unprintable_box(tmp_path):
    point = {k: (getattr(BUCKLER, k), getattr(BUCKLER, k))
             for k in ("rho", "mu", "tau0", "phi_n", "h_n", "v_p", "u_f")}
    with pytest.raises(DomainError, match="printable"):
        build_dataset(str(tmp_path / "x"), n=10, bounds=point)


def test_build_dataset_input_validation(tmp_path):
    with pytest.raises(DomainError):
        build_dataset(str(tmp_path / "x"), n=5)
    with pytest.raises(DomainError):
        build_dataset(str(tmp_path / "x"), n=12, layers=3)
    with pytest.raises(DomainError):
        build_dataset(str(tmp_path / "x"), n=12, split_ratios=(1, -1, 1))


def test_load_dataset_round_trip(tiny_dataset_dir, tiny_manifest):
    again = load_dataset(str(Path(tiny_dataset_dir) / "manifest.json"))
    assert again["n_printable"] == tiny_manifest["n_printable"]
    for ra, rb in zip(again["records"], tiny_manifest["records"]):
        assert np.array_equal(ra["contour"], rb["contour"])


def test_load_dataset_rejects_unknown_version(tmp_path):
    build_dataset(str(tmp_path), n=12, seed=0)
    mfile = tmp_path / "manifest.json"
    m = json.loads(mfile.read_text())
    m["format_version"] = 99
    mfile.write_text(json.dumps(m))
    with pytest.raises(DomainError, match="format_version"):
        load_dataset(str(tmp_path))
    with pytest.raises(DomainError):
        load_dataset(str(tmp_path / "nowhere"))


def test_split_arrays(tiny_manifest, tiny_splits):
    total = 0
    for name, (X, contours) in tiny_splits.items():
        assert X.shape == (len(contours), 5)
        total += len(contours)
    assert total == tiny_manifest["n_printable"]
    with pytest.raises(DomainError):
        split_arrays(tiny_manifest, "holdout")


def test_held_out_records_are_interior(tiny_manifest):
    """Validation and test rows avoid the sampled extremes."""
    recs = tiny_manifest["records"]
    tau = np.array([r["inputs"]["tau0_star"] for r in recs])
    vr = np.array([r["inputs"]["v_star"] for r in recs])
    t_lo, t_hi = np.quantile(tau, (0.05, 0.95))
    v_lo, v_hi = np.quantile(vr, (0.05, 0.95))
    held = [i for i, r in enumerate(recs) if r["split"] != "train"]
    assert held, "fixture dataset has no held-out records"
    for i in held:
        assert t_lo <= tau[i] <= t_hi
        assert v_lo <= vr[i] <= v_hi
