import pytest
from hypothesis import given, strategies as st

from twentyv.enumerate import enumerate_configs, iter_configs, sample_exact
from twentyv.errors import InvalidSize, OutOfDomain
from twentyv.lattice import (BC_NAMES, PHASES, PathConfig, apply_chain, build_domain,
                             first_hit_position, last_step_type, phase_label, recognise_bc,
                             line_family, reflect_shear, transform,
                             triangle_vertices)

CONFIGS5 = {bc: list(iter_configs(build_domain(5, bc))) for bc in BC_NAMES}


@pytest.mark.parametrize("m", range(1, 8))
def test_vertex_count(m):
    assert len(triangle_vertices(m)) == m * (m + 1) // 2
    assert all(x + y >= 0 and x <= 0 and 0 <= y < m for x, y in triangle_vertices(m))


@pytest.mark.parametrize("bad", [0, -1, 2.5, "3"])
def test_bad_size(bad):
    with pytest.raises(InvalidSize):
        build_domain(bad)


@pytest.mark.parametrize("m", range(1, 6))
@pytest.mark.parametrize("bc", BC_NAMES)
def test_boundaries_are_distinct_and_recognised(m, bc):
    dom = build_domain(m, bc)
    assert dom.is_standard
    assert recognise_bc(dom) == bc if m > 1 else recognise_bc(dom) in BC_NAMES


@pytest.mark.parametrize("bc", BC_NAMES)
def test_enumerated_configs_are_valid(bc):
    for cfg in CONFIGS5[bc]:
        assert cfg.is_valid()
        assert sum(cfg.class_counts()) == 15


@given(st.data())
def test_json_round_trip(data):
    bc = data.draw(st.sampled_from(BC_NAMES))
    cfg = data.draw(st.sampled_from(CONFIGS5[bc]))
    back = PathConfig.from_json(cfg.dumps())
    assert back.occupied == cfg.occupied
    assert back.domain.bc == bc


@given(st.data())
def test_total_flip_and_reflections_are_involutions(data):
    cfg = data.draw(st.sampled_from(CONFIGS5["DWBC3"]))
    for step in ("TotalFlip", "VF", "HF", "R", "Rbar"):
        twice = apply_chain(cfg, (step, step), check=False)
        assert twice.occupied == cfg.occupied


@given(st.data())
def test_reflect_shear_reverses_k(data):
    cfg = data.draw(st.sampled_from(CONFIGS5["DWBC3"]))
    img = reflect_shear(cfg)
    assert img.domain.bc == "DWBC2" and img.is_valid()
    assert first_hit_position(img) == 6 - first_hit_position(cfg)
    one = transform(img, "Rstar")
    assert one.domain.bc == "DWBC1"
    assert first_hit_position(one) == first_hit_position(img)


def test_unique_size_one_configuration():
    (cfg,) = list(iter_configs(build_domain(1)))
    assert first_hit_position(cfg) == 1
    assert last_step_type(cfg) in ("Horizontal", "Diagonal")


def test_enumeration_rows_match_counts():
    assert enumerate_configs(build_domain(4)).shape[0] == 24


def test_phase_labels():
    cfg = sample_exact(build_domain(9), seed=4)
    seen = set()
    for v in triangle_vertices(9):
        try:
            lab = phase_label(cfg, v, 2)
        except OutOfDomain:
            continue
        assert lab in PHASES
        seen.add(lab)
    assert "Liquid" in seen or len(seen) > 1
    with pytest.raises(OutOfDomain):
        phase_label(cfg, (0, 0), 2)
    with pytest.raises(ValueError):
        phase_label(cfg, (-8, 8), 0)


@pytest.mark.parametrize("fams,label", [
    ((), "F0"), (("H",), "F1"), (("V",), "F2"), (("H", "D"), "F3"),
    (("D", "V"), "F4"), (("H", "D", "V"), "F5"), (("D",), "F6"),
])
def test_saturation_patterns(fams, label):
    dom = build_domain(6)
    occ = {s for s in dom.segments if line_family(s) in fams}
    assert phase_label(PathConfig(dom, occ), (-3, 5), 2) == label


def test_mixed_window_is_liquid():
    dom = build_domain(6)
    occ = {s for s in dom.segments if line_family(s) == "H" and s[0][1] == 4}
    assert phase_label(PathConfig(dom, occ), (-3, 5), 2) == "Liquid"
