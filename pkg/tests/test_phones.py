import pytest
from hypothesis import given
from hypothesis import strategies as st

from diphonetts import phones
from diphonetts.phones import Category


def test_diphthong_examples():
    assert phones.decompose_diphthongs(["EY1", "T"]) == ["IPAE1", "IH", "T"]
    assert phones.decompose_diphthongs(["K", "IY1"]) == ["K", "IY1"]
    assert phones.decompose_diphthongs(["T", "OY1"]) == ["T", "AO1", "IH"]


def test_all_diphthong_rules():
    assert phones.decompose_diphthongs(["AY"]) == ["IPAA", "IH"]
    assert phones.decompose_diphthongs(["OW"]) == ["IPAO", "UH"]
    assert phones.decompose_diphthongs(["AW"]) == ["IPAA", "UH"]


def test_unknown_symbol_rejected():
    with pytest.raises(phones.UnknownPhoneError, match="QQ"):
        phones.decompose_diphthongs(["QQ"])


def test_decomposition_removes_all_diphthongs():
    out = phones.decompose_diphthongs(
        ["EY0", "AY1", "OW2", "AW0", "OY1", "M", "T"]
    )
    assert not set(phones.strip_stress(p) for p in out) & set(phones.DIPHTHONGS)


@given(st.lists(st.sampled_from(sorted(phones._RAW_SYMBOLS) + ["EY1", "OW0"]),
                max_size=12))
def test_decomposition_idempotent(seq):
    once = phones.decompose_diphthongs(seq)
    assert phones.decompose_diphthongs(once) == once


def test_category_examples():
    assert phones.category("M") is Category.SONORANT
    assert phones.category("S") is Category.OBSTRUENT
    assert phones.category("CH") is Category.STOP
    assert phones.category("X") is Category.SILENCE


def test_category_partitions_inventory():
    counts = {c: 0 for c in Category}
    for p in phones.PHONES:
        counts[phones.category(p)] += 1
    assert counts[Category.STOP] == 8
    assert counts[Category.OBSTRUENT] == 9
    assert counts[Category.SILENCE] == 1
    assert counts[Category.SONORANT] == 20
    assert sum(counts.values()) == len(phones.PHONES)


def test_monophone_count_is_37():
    assert len(phones.MONOPHONES) == 37


def test_capture_diphone_membership():
    captured = phones.capture_diphone_set()
    assert ("L", "N") in captured
    assert ("M", "NG") not in captured
    assert ("N", "M") not in captured
    # no pair terminates in a stop
    assert not any(b in phones.STOPS for _, b in captured)
    # synthetic monophthongs only reach their off-glides
    assert ("IPAE", "IH") in captured
    assert ("IPAE", "UH") not in captured
    assert ("IPAA", "IH") in captured and ("IPAA", "UH") in captured
    assert ("IPAO", "UH") in captured and ("IPAO", "IH") not in captured


def test_capture_diphone_count_matches_enumeration():
    # Independent oracle: count directly from the exclusion rules.
    speakable = set(phones.MONOPHONES)
    expected = 0
    for p1 in speakable:
        for p2 in speakable:
            if p1 == p2 or p2 in phones.STOPS:
                continue
            if p1 in phones.NASALS and p2 in phones.NASALS:
                continue
            if p1 == "IPAE" and p2 != "IH":
                continue
            if p1 == "IPAA" and p2 not in ("IH", "UH"):
                continue
            if p1 == "IPAO" and p2 != "UH":
                continue
            expected += 1
    assert len(phones.capture_diphone_set()) == expected == 958


def test_required_set_includes_silence_pairs():
    required = phones.required_diphone_set()
    assert ("X", "AA") in required and ("AA", "X") in required
    assert ("X", "T") not in required  # stop entries come from bursts
    assert len(required) == 958 + 2 * len(phones.PERSISTENT)


def test_inventory_report_lists_all_phones():
    report = phones.inventory_report()
    for p in phones.PHONES:
        assert f"{p}\t" in report
