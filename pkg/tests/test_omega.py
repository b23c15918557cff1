"""Coset point sets, induced actions, classification flags."""

import numpy as np
import pytest

from rank3pls.catalog import NEGATIVE_CONTROLS, OMEGA_BUILTINS, get_builtin
from rank3pls.matsemi import GroupSpec, gens_group, scalar
from rank3pls.omega import (build_omega, classify_action, induce_action,
                            induced_kernel_facts)
from rank3pls.permcore import PermGroup, perm_order


def test_build_omega_sizes():
    assert len(build_omega("linear", 2, 4, 3)) == 15
    assert len(build_omega("unitary", 3, 4, 3)) == 195
    assert len(build_omega("linear", 2, 9, 2)) == 20


def test_build_omega_rejects():
    with pytest.raises(ValueError):
        build_omega("linear", 2, 3, 2)
    with pytest.raises(ValueError):
        build_omega("linear", 2, 4, 2)   # r must divide q - 1
    with pytest.raises(ValueError):
        build_omega("unitary", 3, 4, 5)  # r | q + 1 rejected
    with pytest.raises(ValueError):
        build_omega("unitary", 2, 4, 3)
    with pytest.raises(ValueError):
        build_omega("affine", 2, 4, 3)


def test_alpha_and_cell_indexing():
    sp = build_omega("linear", 2, 16, 5)
    assert sp.points[0] == (1, 0)
    assert sp.sigma[0] == list(range(5))
    spu = build_omega("unitary", 3, 4, 3)
    assert spu.points[0] == (1, 0, 0)
    assert spu.sigma[0] == [0, 1, 2]
    assert spu.index_of((0, 0, 1)) == 3  # f right after the alpha cell


def test_canonical_form_unique():
    sp = build_omega("linear", 2, 9, 2)
    F = sp.field
    for v in sp.points:
        for i in range(sp.r):
            scaled = tuple(F.mul(F.exp[(2 * i) % (F.q - 1)], x) for x in v)
            assert sp.canonicalize(scaled) == v


def test_kernel_facts():
    for kind, n, q, r in [("linear", 2, 4, 3), ("linear", 2, 25, 3),
                          ("unitary", 3, 4, 3)]:
        sp = build_omega(kind, n, q, r)
        trivial, order = induced_kernel_facts(sp)
        assert trivial and order == r


def test_scalar_action_shape():
    sp = build_omega("linear", 2, 25, 3)
    F = sp.field
    perm = induce_action(sp, [scalar(F, F.omega, 2)])[0]
    assert perm_order(perm) == 3
    assert not (perm == np.arange(len(sp))).any()  # fixed-point-free
    # permutes each cell cyclically
    for cell in sp.sigma:
        assert sorted(int(perm[x]) for x in cell) == cell


def test_phi_fixes_subfield_points():
    sp = build_omega("linear", 2, 4, 3)
    from rank3pls.matsemi import phi
    perm = induce_action(sp, [phi(sp.field, 2)])[0]
    for vec in [(1, 0), (0, 1)]:
        i = sp.index_of(vec)
        assert perm[i] == i


def test_induce_action_rejects_non_permuting():
    sp = build_omega("unitary", 3, 4, 3)
    from rank3pls.matsemi import Mat, linear
    bad = linear(Mat(sp.field, [[1, 1, 0], [0, 1, 0], [0, 0, 1]]))  # not unitary
    with pytest.raises(ValueError):
        induce_action(sp, [bad])


def test_suborbit_shape_across_catalogue():
    for name, meta in OMEGA_BUILTINS.items():
        if meta.slow:
            continue
        b = get_builtin(name)
        G = b.group
        st = G.stabilizer(0)
        sizes = sorted(len(o) for o in st.orbits())
        r = meta.r
        assert sizes == [1, r - 1, G.degree - r], name


def test_classify_catalogue_flags_and_types():
    for name, meta in OMEGA_BUILTINS.items():
        if meta.slow:
            continue
        b = get_builtin(name)
        spec = meta.spec
        flags = classify_action(spec.n, spec.q, spec.r, b.group, spec, b.space)
        assert flags["semiprimitive"]
        assert flags["rank3"], name
        assert flags["type"] == meta.gtype, (name, flags)


def test_classify_negative_controls():
    for spec in NEGATIVE_CONTROLS:
        if spec.q ** (2 if spec.kind == "unitary" else 1) > 1000:
            continue  # the big ones run in the acceptance suite
        sp = build_omega(spec.kind, spec.n, spec.q, spec.r)
        from rank3pls.catalog import induced_order
        G = PermGroup(len(sp), induce_action(sp, gens_group(spec)),
                      expected_order=induced_order(spec), name=str(spec))
        flags = classify_action(spec.n, spec.q, spec.r, G, spec, sp)
        assert not flags["rank3"], spec


def test_classify_consistency_failure_raises():
    """Feeding the wrong spec for a group trips the rank cross-check."""
    b = get_builtin("GammaL2_4")
    wrong = GroupSpec("linear", 2, 4, 3, "sl")  # claims j = a, so not rank 3
    with pytest.raises(AssertionError):
        classify_action(2, 4, 3, b.group, wrong, b.space)


def test_space_json_export():
    import json
    sp = build_omega("linear", 2, 4, 3)
    data = json.loads(sp.to_json())
    assert data["kind"] == "linear" and len(data["points"]) == 15
    assert sorted(map(tuple, data["sigma"]))[0] == (0, 1, 2)
