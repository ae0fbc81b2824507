from cantorfull import elekmonod as em


def test_labels_are_dyadic_valuations():
    assert [em.label(m) for m in (1, 2, 3, 4, 6, 8, 12)] == [0, 1, 0, 2, 1, 3, 2]


def test_word_enumeration_order():
    assert [em.delta_word(i) for i in range(1, 10)] == [
        "A", "B", "C", "AB", "AC", "BA", "BC", "CA", "CB"
    ]


def test_delta_index_inverts_enumeration():
    for i in (1, 4, 9, 17):
        assert em.delta_index(em.delta_word(i)) == i


def test_color_oracle_values():
    assert em.sigma_color(em.LatticeEdge((2, 1), "V")) == "D"
    assert em.sigma_color(em.LatticeEdge((3, 0), "V")) == "A"
    assert em.sigma_color(em.LatticeEdge((0, 5), "H")) == "E"


def test_horizontal_colors_by_column_parity():
    for y in range(-4, 5):
        assert em.sigma_color(em.LatticeEdge((0, y), "H")) == "E"
        assert em.sigma_color(em.LatticeEdge((1, y), "H")) == "F"


def test_check_proper_small_region():
    ok, violation = em.check_proper((-16, 16, -16, 16))
    assert ok and violation is None


def test_same_pattern_small():
    assert em.same_pattern_check(2, range(6))


def test_pattern_count_and_bound():
    count, _ = em.pattern_count(2, (-256, 256))
    assert count == 174
    assert em.pattern_bound(3) == 25165824


def test_letters_act_as_involutions():
    for letter in em.ALPHABET:
        for q in ((0, 0), (3, 7), (-5, 2)):
            assert em.apply_word(em.apply_word(q, letter), letter) == q


def test_word_witnesses():
    for word in ("A", "AB", "ABC"):
        res = em.word_acts_nontrivially(word, 16)
        assert res is not None
        assert em.apply_word(res["witness"], word) == res["image"]
        assert res["witness"] != res["image"]


def test_word_column_fallback():
    res = em.word_acts_nontrivially("BCBC", 32)
    assert res is not None and res["method"] == "word-column"
    assert em.apply_word(res["witness"], "BCBC") == res["image"]
    assert res["witness"] != res["image"]


def test_entropy_rows_exact_columns():
    rows = em.entropy_table(2, h_half_width=256)
    assert [r["count"] for r in rows][1] == 174
    for r in rows:
        assert isinstance(r["count"], int) and isinstance(r["bound"], int)
