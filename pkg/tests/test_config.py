"""Config parsing, canonical serialization, and identity hashing."""

import hashlib

import pytest

from qecdesk import config
from qecdesk.errors import InvalidParameter
from _kit import make_cfg


def test_defaults():
    cfg = make_cfg()
    assert cfg.fifo_depth == 64
    assert cfg.deadline == 2000
    assert cfg.t_cycle == 1000
    assert cfg.staleness == 10000
    assert cfg.schema == 1


def test_canonical_text_is_sorted_key_value_lines():
    text = make_cfg().canonical_text()
    lines = text.splitlines()
    assert text.endswith("\n")
    keys = [ln.split(" = ")[0] for ln in lines]
    assert keys == sorted(keys)
    assert all(" = " in ln for ln in lines)
    assert "d = 3" in lines and "kind = planar" in lines


def test_cfg_id_is_first_8_hash_bytes_le():
    cfg = make_cfg()
    digest = hashlib.sha256(cfg.canonical_text().encode()).digest()
    assert cfg.cfg_id == int.from_bytes(digest[:8], "little")


def test_parse_round_trips_canonical_text():
    cfg = make_cfg(window=2, q_meas=0.001, fifo_depth=32)
    assert config.parse_config(cfg.canonical_text()) == cfg


def test_parse_ignores_comments_and_blank_lines():
    cfg = make_cfg()
    text = "# header comment\n\n" + cfg.canonical_text() + "\n# trailing\n"
    assert config.parse_config(text) == cfg


def test_cfg_id_tracks_every_field():
    base = make_cfg()
    assert base.cfg_id != make_cfg(seed=8).cfg_id
    assert base.cfg_id != make_cfg(p_data=0.02).cfg_id
    assert base.cfg_id != make_cfg(d=5).cfg_id
    assert base.cfg_id == make_cfg().cfg_id


def test_with_seed():
    cfg = make_cfg()
    reseeded = config.with_seed(cfg, 99)
    assert reseeded.seed == 99
    assert reseeded.cfg_id != cfg.cfg_id
    assert config.with_seed(cfg, cfg.seed) == cfg


def test_schema_gate():
    with pytest.raises(InvalidParameter, match="schema"):
        make_cfg(schema=2)
    text = make_cfg().canonical_text().replace("schema = 1", "schema = 9")
    with pytest.raises(InvalidParameter, match="schema"):
        config.parse_config(text)


@pytest.mark.parametrize("field,value", [
    ("kind", "hexagonal"),
    ("size", 1),
    ("window", 0),
    ("window", 65),
    ("p_data", 0.5),
    ("p_data", -0.1),
    ("q_meas", 0.7),
    ("fifo_depth", 0),
    ("deadline", 0),
    ("t_cycle", 0),
    ("r_max", -1),
    ("seed", 1 << 64),
])
def test_field_validation(field, value):
    with pytest.raises(InvalidParameter):
        make_cfg(**{field: value})


def test_parse_rejects_duplicates_and_unknowns():
    cfg = make_cfg()
    text = cfg.canonical_text()
    with pytest.raises(InvalidParameter, match="duplicate"):
        config.parse_config(text + "d = 3\n")
    with pytest.raises(InvalidParameter):
        config.parse_config(text + "zeta = 1\n")
    with pytest.raises(InvalidParameter):
        config.parse_config("kind = planar\n")      # missing fields


def test_size_key_must_match_kind():
    toric_text = make_cfg().canonical_text().replace("kind = planar",
                                                     "kind = toric")
    with pytest.raises(InvalidParameter):
        config.parse_config(toric_text)             # toric needs l, not d


def test_effective_limits_default_to_distance(cfg3):
    assert cfg3.effective_r_max() == 3
    assert cfg3.effective_p_max() == 30
    explicit = make_cfg(r_max=7, p_max=11)
    assert explicit.effective_r_max() == 7
    assert explicit.effective_p_max() == 11


def test_build_code_and_packet_len(cfg3):
    code = cfg3.build_code()
    assert code.kind == "planar" and code.d == 3
    assert cfg3.payload_bytes() == 1
    assert cfg3.packet_len() == 37


def test_load_config(tmp_path, cfg3):
    path = tmp_path / "run.cfg"
    path.write_text(cfg3.canonical_text())
    assert config.load_config(path) == cfg3


def test_float_formatting_round_trips_exactly():
    cfg = make_cfg(p_data=0.1 + 0.2 - 0.2)     # not exactly 0.1
    again = config.parse_config(cfg.canonical_text())
    assert again.p_data == cfg.p_data
