import pytest

from braidkit import presets
from braidkit.rtensor import RMatrixError


@pytest.mark.parametrize("name", sorted(presets.PRESETS))
def test_presets_load(name):
    pair = presets.load_preset(name)
    assert pair.n == 4
    assert pair.name == name


def test_preset_metadata(euclid, mink):
    assert euclid.reality == "I" and euclid.metric is not None
    assert mink.reality is None and mink.metric is not None


def test_unknown_preset():
    with pytest.raises(RMatrixError, match="unknown preset 'nope'"):
        presets.load_preset("nope")


def test_tables_parse(alg):
    ref = presets.reference_table(alg)
    assert len(ref) == 4 and all(len(row) == 4 for row in ref)
    assert ref[0][0] == alg.parse("-x1.x1")
    assert ref[2][1] == alg.parse("-x1.x4 - (q-q^-1)*x2.x3")


def test_parse_table_skips_comments(alg):
    rows = presets.parse_table("# header\n\nx1 | x2\n", alg)
    assert rows == [[alg.gen(0), alg.gen(1)]]
