import io

import pytest

from diphonetts import lexicon


CMUDICT_SAMPLE = """\
;;; comment line
KEGS  K EH1 G Z
READ  R EH1 D
READ(1)  R IY1 D
THOUGHT  TH AO1 T
"""


def _load(text):
    return lexicon.load_cmudict(io.StringIO(text))


def test_load_cmudict_examples():
    lex = _load(CMUDICT_SAMPLE)
    assert len(lex) == 3
    assert lex.get("KEGS").pronunciations == [["K", "EH1", "G", "Z"]]
    assert len(lex.get("READ").pronunciations) == 2


def test_empty_stream_gives_empty_lexicon():
    assert len(_load("")) == 0


def test_malformed_line_reports_line_number():
    with pytest.raises(lexicon.LexiconError, match="line 2"):
        _load("KEG  K EH1 G\nJUNKLINE\n")


def test_duplicate_variant_rejected():
    with pytest.raises(lexicon.LexiconError, match="duplicate"):
        _load("KEG  K EH1 G\nKEG  K EH1 G\n")


def test_unknown_phone_rejected():
    with pytest.raises(lexicon.LexiconError, match="QX"):
        _load("KEG  K QX G\n")


def test_lookup_defaults_to_first_variant():
    lex = _load(CMUDICT_SAMPLE)
    assert lex.lookup("read") == ["R", "EH1", "D"]
    assert lex.lookup("READ", pos="A") == ["R", "EH1", "D"]
    assert lex.lookup("ZZZZQX") is None


def test_homograph_selector():
    lex = _load("PROJECT  P R AA1 JH EH0 K T\nPROJECT(1)  P R AA0 JH EH1 K T\n")
    lexicon.load_homographs(io.StringIO("PROJECT\tN\t0\nPROJECT\tV\t1\n"), lex)
    assert lex.lookup("PROJECT", "N") == "P R AA1 JH EH0 K T".split()
    assert lex.lookup("PROJECT", "V") == "P R AA0 JH EH1 K T".split()
    assert lex.lookup("PROJECT") == "P R AA1 JH EH0 K T".split()


def test_lookup_without_pos_equals_variant_zero():
    lex = _load(CMUDICT_SAMPLE)
    for word in ("KEGS", "READ", "THOUGHT"):
        assert lex.lookup(word) == lex.get(word).pronunciations[0]


def test_round_trip_preserves_entries():
    lex = _load(CMUDICT_SAMPLE)
    buffer = io.StringIO()
    lexicon.dump_cmudict(lex, buffer)
    again = _load(buffer.getvalue())
    assert len(again) == len(lex)
    for word in lex.headwords():
        assert again.get(word).pronunciations == lex.get(word).pronunciations


def test_load_mpos_examples():
    entries = lexicon.load_mpos(io.StringIO("keg×N\nread×VtNiA\nzip×Nit\n"))
    assert [(e.headword, e.pos_codes) for e in entries] == [
        ("keg", "N"), ("read", "VtNiA"), ("zip", "Nit"),
    ]


def test_mpos_missing_delimiter():
    with pytest.raises(lexicon.LexiconError, match="line 1"):
        lexicon.load_mpos(io.StringIO("keg N\n"))


def test_dedup_identical_codes():
    raw = lexicon.load_mpos(io.StringIO("Yen×N\nyen×N\n"))
    lex, fixed = lexicon.dedup_case_variants(raw)
    assert fixed == 1
    assert lex.codes("YEN") == "N"
    assert lex.entries["YEN"].headword == "yen"


def test_dedup_subset_keeps_superset():
    raw = lexicon.load_mpos(io.StringIO("Ring×N\nring×NVt\n"))
    lex, fixed = lexicon.dedup_case_variants(raw)
    assert fixed == 1
    assert lex.codes("RING") == "NVt"


def test_dedup_disjoint_unions():
    raw = lexicon.load_mpos(io.StringIO("Wobbly×N\nwobbly×A\n"))
    lex, fixed = lexicon.dedup_case_variants(raw)
    assert fixed == 1
    assert set(lex.codes("WOBBLY")) == {"A", "N"}


def test_dedup_result_case_insensitive_unique():
    raw = lexicon.load_mpos(
        io.StringIO("Ring×N\nring×NVt\nRING×V\nkeg×N\n")
    )
    lex, _ = lexicon.dedup_case_variants(raw)
    uppers = [e.headword.upper() for e in lex.entries.values()]
    assert len(uppers) == len(set(uppers)) == 2
