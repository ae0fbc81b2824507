from fractions import Fraction

from cantorfull import boxes, groups


def brute_interior_boundary(box, shape):
    pts = set(box.members())
    moves = list(shape.members())
    count = 0
    for g in pts:
        for s in moves:
            if tuple(a + b for a, b in zip(s, g)) not in pts:
                count += 1
                break
    return count


def test_box_basics():
    b = boxes.Box.cube(2, 1, 4)
    assert b.size() == 16
    assert b.contains((4, 1)) and not b.contains((5, 1))
    assert boxes.Box.centered(1, 3).span(0) == (-3, 3)


def test_interior_boundary_matches_enumeration():
    ctx = groups.int_vector_context(2)
    shape = boxes.VecSet(tuple(sorted(ctx.generators)))
    for side in (1, 2, 3, 5, 8):
        b = boxes.Box.cube(2, 1, side)
        assert boxes.interior_boundary_count(b, shape) == brute_interior_boundary(b, shape)


def test_interior_boundary_asymmetric_shape():
    shape = boxes.VecSet(((0,), (2,), (-1,)))
    for side in (1, 2, 4, 9):
        b = boxes.Box.cube(1, 1, side)
        assert boxes.interior_boundary_count(b, shape) == brute_interior_boundary(b, shape)


def test_interior_defect_closed_form_large():
    shape = boxes.VecSet(((0, 0), (1, 0), (-1, 0), (0, 1), (0, -1)))
    big = boxes.Box.cube(2, 1, 10**9)
    d = boxes.interior_defect(big, shape)
    # boundary of a huge cube under the cross shape: 4 sides minus corners
    n = 10**9
    assert d == Fraction(4 * n - 4, n * n)


def test_core_box():
    b = boxes.Box.cube(2, 1, 8)
    shape = boxes.VecSet(((0, 0), (1, 0), (0, 1)))
    core = boxes.core_box(b, shape)
    assert core is not None
    for c in core.members():
        assert all(
            b.contains(tuple(x + y for x, y in zip(s, c))) for s in shape.members()
        )
