from itertools import product
from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st

from knotbien.encoding import (EncodingError, EncodingTable, encode_sequence, encoding_space_size,
                               generate_encoding_set, load_encoding_set, loads_encoding_set,
                               save_encoding_set)
from knotbien.lattice import LETTERS, parse_newsud

DATA = Path(__file__).resolve().parents[1] / "data"
TABLE3_ROW1 = EncodingTable.from_mapping({"N": 84, "E": 41, "W": 102, "S": 101, "U": 67, "D": 222}, 8)


def test_space_sizes():
    assert encoding_space_size(3) == 20160
    assert encoding_space_size(8) == pytest.approx(2.65e14, rel=5e-3)


class TestTable:
    def test_duplicate(self):
        with pytest.raises(EncodingError, match="duplicate"):
            EncodingTable(8, (7, 7, 1, 2, 3, 4))

    def test_out_of_range(self):
        with pytest.raises(EncodingError):
            EncodingTable(3, (0, 1, 2, 3, 4, 8))

    def test_lookup(self):
        assert TABLE3_ROW1["D"] == 222
        assert TABLE3_ROW1.as_dict()["N"] == 84


class TestGenerate:
    def test_three_bit(self):
        enc = generate_encoding_set(123, 1, 3)
        codes = enc[0].codes
        assert len(set(codes)) == 6 and all(0 <= c < 8 for c in codes)

    def test_deterministic(self):
        assert generate_encoding_set(99, 256, 8) == generate_encoding_set(99, 256, 8)
        assert generate_encoding_set(99, 4, 8) != generate_encoding_set(100, 4, 8)

    def test_64_bit_seed(self):
        enc = generate_encoding_set(2**64 - 1, 2, 8)
        assert len(enc) == 2

    @pytest.mark.parametrize("width", [2, 5, 16])
    def test_bad_width(self, width):
        with pytest.raises(EncodingError):
            generate_encoding_set(1, 1, width)

    def test_many_seeds_valid(self):
        # construction would raise on a non-injective or out-of-range table
        for seed in range(10_000):
            enc = generate_encoding_set(seed, 1, (3, 4, 8)[seed % 3])
            assert len(set(enc[0].codes)) == 6

    def test_three_bit_tables_roughly_uniform(self):
        enc = generate_encoding_set(5, 20000, 3)
        counts = [0] * 8
        for t in enc:
            counts[t["N"]] += 1
        assert all(abs(c / 20000 - 1 / 8) < 0.01 for c in counts)


class TestEncode:
    def test_unknot_worked_example(self):
        s = encode_sequence(parse_newsud("DEUW"), TABLE3_ROW1)
        assert str(s) == "11011110001010010100001101100110"

    def test_table_code_bits(self):
        # 44 -> 00101100 and 3 -> 00000011, most significant bit first
        enc = loads_encoding_set((DATA / "encoding_A_first4.csv").read_text())
        assert str(encode_sequence(parse_newsud("N"), enc[0])) == "00101100"
        enc_b = load_encoding_set(DATA / "encoding_B_first4.csv")
        assert str(encode_sequence(parse_newsud("S"), enc_b[3])) == "00000011"

    @pytest.mark.parametrize("letters, bits", [(24, 192), (64, 512)])
    def test_lengths(self, letters, bits):
        seq = parse_newsud(("NEWSUD" * 11)[:letters])
        assert len(encode_sequence(seq, TABLE3_ROW1)) == bits

    def test_injective_on_short_sequences(self):
        table = generate_encoding_set(3, 1, 3)[0]
        for n in (1, 2, 3, 4):
            seen = {}
            for letters in product(LETTERS, repeat=n):
                s = encode_sequence(parse_newsud("".join(letters)), table)
                assert s not in seen
                seen[s] = letters


class TestPersistence:
    def test_table2_first_row(self):
        enc = load_encoding_set(DATA / "encoding_A_first4.csv")
        assert enc.label == "ENCODING_A" and enc.bit_width == 8
        assert enc[0].as_dict() == {"N": 44, "E": 82, "W": 201, "S": 21, "U": 245, "D": 214}

    def test_table3_first_row(self):
        enc = load_encoding_set(DATA / "encoding_B_first4.csv")
        assert enc[0] == TABLE3_ROW1

    def test_duplicate_row_reported(self):
        text = "N,E,W,S,U,D\n1,2,3,4,5,6\n7,7,1,2,3,4\n"
        with pytest.raises(EncodingError, match="row 2"):
            loads_encoding_set(text)

    def test_out_of_range(self):
        with pytest.raises(EncodingError):
            loads_encoding_set("# bit_width=3\nN,E,W,S,U,D\n1,2,3,4,5,9\n")

    @pytest.mark.parametrize("text", ["", "A,B\n1,2\n", "N,E,W,S,U,D\n1,2,3\n",
                                      "N,E,W,S,U,D\n1,2,x,4,5,6\n", "N,E,W,S,U,D\n"])
    def test_malformed(self, text):
        with pytest.raises(EncodingError):
            loads_encoding_set(text)

    def test_width_inferred(self):
        assert loads_encoding_set("N,E,W,S,U,D\n0,1,2,3,4,5\n").bit_width == 3
        assert loads_encoding_set("N,E,W,S,U,D\n0,1,2,3,4,200\n").bit_width == 8

    @settings(max_examples=25, deadline=None)
    @given(st.integers(0, 2**64 - 1), st.integers(1, 40), st.sampled_from([3, 4, 8]))
    def test_round_trip(self, seed, count, width):
        import tempfile
        enc = generate_encoding_set(seed, count, width, label="ENC_X")
        with tempfile.TemporaryDirectory() as d:
            path = Path(d) / "enc.csv"
            save_encoding_set(enc, path)
            assert load_encoding_set(path) == enc
