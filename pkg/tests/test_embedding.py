import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_image
from lscstego.embedding import (CapacityError, embed, embed_in_image,
                                embed_word, extract, extract_from_image,
                                randomize_lscs, substitute)
from lscstego.media import (byte_plane_significance, extract_bits, partition)
from lscstego.strategy import StegoKey, Strategy, generate_strategy

TABLE = byte_plane_significance()


def test_embed_derived_example():
    # simulate the iteration by hand: writes at 0,1,1,0 set m0, m1
    s = Strategy(terms=(0, 1, 1, 0), p_width=2)
    assert embed([0, 0, 0, 0], [1, 1], s) == [1, 1, 0, 0]


def test_embed_single_position():
    s = Strategy(terms=(0, 0), p_width=1)
    assert embed([1, 0, 1], [0], s) == [0, 0, 1]


def test_embed_noop_when_message_matches_cover():
    s = Strategy(terms=(1, 0, 1), p_width=2)
    x0 = [1, 0, 1, 1]
    assert embed(x0, [1, 0], s) == x0


def test_embed_capacity_error():
    s = Strategy(terms=(0, 1, 2, 2, 1, 0), p_width=3)
    with pytest.raises(CapacityError):
        embed([0, 0], [1, 0, 1], s)


def test_embed_half_capacity_warning():
    s = Strategy(terms=(0, 1, 1, 0), p_width=2)
    with pytest.warns(UserWarning, match="far smaller"):
        embed([0, 0, 0], [1, 1], s)


def test_substitution_oracle():
    assert substitute([0, 0, 0, 0], [1, 1]) == [1, 1, 0, 0]
    assert substitute([1, 0, 1], []) == [1, 0, 1]
    assert substitute([1, 1], [0, 0]) == [0, 0]


def test_extract_prefix():
    assert extract([1, 1, 0, 0], 2) == [1, 1]
    assert extract([1, 0], 2) == [1, 0]
    with pytest.raises(ValueError):
        extract([1, 0], 3)


@given(st.data())
@settings(max_examples=200)
def test_equivalence_with_oracle(data):
    n = data.draw(st.integers(1, 16))
    p = data.draw(st.integers(1, n))
    x0 = [data.draw(st.integers(0, 1)) for _ in range(n)]
    m = [data.draw(st.integers(0, 1)) for _ in range(p)]
    lam = data.draw(st.integers(p + 1, 2 * p + 4))
    seed = data.draw(st.binary(min_size=1, max_size=8))
    strat = generate_strategy(StegoKey(seed=seed), p, lam)
    import warnings
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        assert embed(x0, m, strat) == substitute(x0, m)


@pytest.mark.filterwarnings("ignore::UserWarning")
def test_embed_is_idempotent():
    s = Strategy(terms=(2, 0, 1, 2), p_width=3)
    m = [1, 0, 1]
    y = embed([0, 0, 0, 0, 1], m, s)
    assert embed(y, m, s) == y


@pytest.mark.filterwarnings("ignore::UserWarning")
def test_embed_word_matches_list_form():
    s = Strategy(terms=(1, 0, 2, 1), p_width=3)
    y = embed([0, 1, 0, 1, 1], [1, 1, 0], s)
    w = embed_word(0b11010, 5, 0b011, 3, s.terms)
    assert [(w >> i) & 1 for i in range(5)] == y


def test_randomize_lscs_deterministic_and_isolated():
    import numpy as np
    rng = np.random.default_rng(7)
    img = random_image(rng, 16, 16)
    part = partition(TABLE, img.bit_length, 1, 5)
    key = StegoKey(seed=b"randomize-test")
    out1 = randomize_lscs(img, part, key)
    out2 = randomize_lscs(img, part, key)
    assert out1 == out2
    keep = list(part.msc) + list(part.passive)
    assert extract_bits(out1, keep) == extract_bits(img, keep)


def test_randomize_lscs_balance():
    import numpy as np
    rng = np.random.default_rng(3)
    img = random_image(rng, 512, 512)
    part = partition(TABLE, img.bit_length, 1, 5)
    assert len(part.lsc) == 512 * 512
    out = randomize_lscs(img, part, StegoKey(seed=b"balance"))
    ones = sum(extract_bits(out, part.lsc))
    frac = ones / len(part.lsc)
    assert 0.49 <= frac <= 0.51


def test_image_round_trip():
    import numpy as np
    rng = np.random.default_rng(11)
    img = random_image(rng, 24, 24)
    key = StegoKey(seed=b"round-trip-key")
    message = b"attack at dawn"
    stego = embed_in_image(img, TABLE, 1, 5, message, key)
    assert extract_from_image(stego, TABLE, 1, 5, len(message)) == message


def test_image_round_trip_without_prerandomize():
    import numpy as np
    rng = np.random.default_rng(12)
    img = random_image(rng, 24, 24)
    key = StegoKey(seed=b"no-prerand")
    stego = embed_in_image(img, TABLE, 1, 5, b"xy", key, prerandomize=False)
    assert extract_from_image(stego, TABLE, 1, 5, 2) == b"xy"
    # outside the written message bits, the cover is untouched
    part = partition(TABLE, img.bit_length, 1, 5)
    rest = part.lsc[16:]
    assert extract_bits(stego, rest) == extract_bits(img, rest)


def test_image_embed_preserves_msc_and_passive():
    import numpy as np
    rng = np.random.default_rng(13)
    img = random_image(rng, 20, 20)
    part = partition(TABLE, img.bit_length, 1, 5)
    stego = embed_in_image(img, TABLE, 1, 5, b"hi", StegoKey(seed=b"k1"))
    keep = list(part.msc) + list(part.passive)
    assert extract_bits(stego, keep) == extract_bits(img, keep)


def test_image_capacity_error():
    import numpy as np
    rng = np.random.default_rng(14)
    img = random_image(rng, 8, 8)  # 64 LSC bits = 8 bytes
    with pytest.raises(CapacityError):
        embed_in_image(img, TABLE, 1, 5, b"123456789", StegoKey(seed=b"k"))
    with pytest.raises(CapacityError):
        extract_from_image(img, TABLE, 1, 5, 9)


def test_extract_from_image_packing():
    import numpy as np
    rng = np.random.default_rng(15)
    img = random_image(rng, 8, 8)
    part = partition(TABLE, img.bit_length, 1, 5)
    from lscstego.media import write_bits
    img0 = write_bits(img, part.lsc[:16], [0] * 16)
    assert extract_from_image(img0, TABLE, 1, 5, 2) == b"\x00\x00"
    imgA = write_bits(img, part.lsc[:8], [0, 1, 0, 0, 0, 0, 0, 1])
    assert extract_from_image(imgA, TABLE, 1, 5, 1) == b"\x41"


def test_biased_message_warning():
    import numpy as np
    rng = np.random.default_rng(16)
    img = random_image(rng, 32, 32)
    with pytest.warns(UserWarning, match="encrypt"):
        embed_in_image(img, TABLE, 1, 5, b"\x00" * 16, StegoKey(seed=b"k"))
