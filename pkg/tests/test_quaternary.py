import itertools

import pytest

from qed_distill.codes import load_catalog
from qed_distill.quaternary import (
    MUL,
    bundled_point_sets,
    certify,
    dot,
    gf4_rank,
    is_cap,
    is_self_orthogonal,
    min_undetected_weight,
    normalize,
    projective_points,
    stabilizer_rows,
)


def test_field_tables():
    # multiplicative group of order 3, addition is xor
    for a in range(1, 4):
        assert MUL[a][1] == a
        assert any(MUL[a][b] == 1 for b in range(1, 4))
    for a, b, c in itertools.product(range(4), repeat=3):
        assert MUL[a][b ^ c] == MUL[a][b] ^ MUL[a][c]


def test_projective_counts():
    assert len(projective_points(2)) == 5
    assert len(projective_points(3)) == 21
    for p in projective_points(3):
        assert normalize(p) == p


def test_rank():
    pts = projective_points(3)
    assert gf4_rank(pts) == 3
    assert gf4_rank([pts[0], pts[0]]) == 1


def test_full_projective_line_gives_five_qubit_code():
    pts = projective_points(2)
    assert is_self_orthogonal(pts)
    stabs = stabilizer_rows(pts)
    assert all(a.commutes_with(b) for a, b in itertools.combinations(stabs, 2))
    assert min_undetected_weight(stabs, 3) == 3
    assert certify(pts, 3) == (5, 1)


def test_certify_rejects_bad_sets():
    pts = projective_points(2)
    with pytest.raises(ValueError):
        certify(pts[:4], 3)  # four points of the line: not self-orthogonal
    with pytest.raises(ValueError):
        certify(pts + [pts[0]], 2)
    # the full plane has collinear triples, so it is no cap
    assert not is_cap(projective_points(3))
    with pytest.raises(ValueError, match="weight 3"):
        certify(projective_points(3), 4)


def test_hermitian_form_conjugate_symmetry():
    # <a, b> = sum a_i * conj(b_i) with conj(x) = x^2
    a = (1, 2, 3)
    assert dot(a, a) in (0, 1)


def test_bundled_sets_certify_every_catalog_row():
    sets = bundled_point_sets()
    cat = load_catalog(None, generated=False)
    assert {c.token[1:] for c in cat} == set(sets)
    for key, pts in sets.items():
        n, k, d = (int(v) for v in key.split("."))
        if n > 21:
            continue  # the larger certificates run in test_bundled_sets_large
        assert certify(pts, d) == (n, k)


@pytest.mark.slow
def test_bundled_sets_large():
    for key, pts in bundled_point_sets().items():
        n, k, d = (int(v) for v in key.split("."))
        if n > 21:
            assert certify(pts, d) == (n, k)
