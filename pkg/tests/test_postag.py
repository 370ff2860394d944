import io
import random
from fractions import Fraction

import pytest

from diphonetts import postag
from diphonetts.postag import TrigramModel


def test_reduce_claws7_examples():
    assert postag.reduce_claws7("VVD") == "V"
    assert postag.reduce_claws7("AT1") == "D"
    assert postag.reduce_claws7("FW") == "?"
    assert postag.reduce_claws7("zz9q") == "?"


def test_reduce_brown_examples():
    assert postag.reduce_brown("JJR") == "A"
    assert postag.reduce_brown("PPO") == "r"
    assert postag.reduce_brown("nosuchtag") == "?"
    # hyphenated and negated forms reduce through their base tag
    assert postag.reduce_brown("jj-tl") == "A"
    assert postag.reduce_brown("bedz*") == "C"


def test_build_model_table27_row():
    stream = io.StringIO("48\ta B.A. degree\tat1 nn1 nn1\n")
    model = postag.build_model(stream)
    assert model.trigrams[("D", "N", "N")] == 48
    assert model.overrides[("A", "B.A.", "DEGREE")] == ("D", "N", "N")
    assert model.bigrams[("D", "N")] == 48


def test_build_model_skips_malformed_rows():
    stream = io.StringIO("oops\nnot_a_number\ta b c\tat nn1 nn1\n")
    model = postag.build_model(stream)
    assert model.skipped_rows == 2
    assert len(model.trigrams) == 0


def test_build_model_drops_unmappable_tags():
    stream = io.StringIO("10\tthe foreign word\tat fw nn1\n")
    model = postag.build_model(stream)
    assert len(model.trigrams) == 0
    assert model.skipped_rows == 1


class ListPosLexicon:
    def __init__(self, mapping):
        self.mapping = {k.upper(): v for k, v in mapping.items()}

    def codes(self, word):
        return self.mapping.get(word.upper())


def test_candidate_tags_unknown_word(resources):
    assert postag.candidate_tags("RINGS", resources.poslex) == \
        ["N", "p", "V", "A", "v", "!"]


def test_candidate_tags_the(resources):
    assert postag.candidate_tags("THE", resources.poslex) == ["D", "v"]


def test_candidate_tags_numeric():
    assert postag.candidate_tags("10", None) == ["N"]
    assert postag.candidate_tags("3,141", None) == ["N"]


def test_candidate_tags_mpos_folding():
    lex = ListPosLexicon({"zip": "Nit", "phrase": "h", "one": "oI"})
    assert postag.candidate_tags("zip", lex) == ["N", "V"]
    # h drops; o and I fold
    assert postag.candidate_tags("one", lex) == ["N", "D"]
    assert postag.candidate_tags("phrase", lex) == list(postag.OPEN_CLASSES)


def test_tag_sentence_table29_example(resources):
    words = "I WANT TO PROJECT MY PROJECT ONTO THE WALL".split()
    assert postag.tag_sentence(words, resources.tagmodel, resources.poslex) == \
        ["r", "V", "v", "V", "D", "N", "P", "D", "N"]


def test_single_word_first_candidate(resources):
    assert postag.tag_sentence(["THE"], resources.tagmodel, resources.poslex) == ["D"]


def test_empty_model_falls_back_to_first_candidates(resources):
    model = TrigramModel()
    words = "THE RINGS".split()
    tags = postag.tag_sentence(words, model, resources.poslex)
    assert tags == ["D", "N"]
    longer = "THE RINGS THE RINGS".split()
    assert postag.tag_sentence(longer, model, resources.poslex) == \
        ["D", "N", "D", "N"]


def test_worked_example_table28_ratio():
    # With only the consolidated counts loaded, the transition probability
    # P(N | N,N) over candidates {N,V} is the exact count ratio.
    model = TrigramModel()
    model.trigrams[("N", "N", "N")] = 289770
    model.trigrams[("N", "N", "V")] = 142513
    import math
    lp = postag._log_transition(model, "N", "N", "N", ["N", "V"])
    expected = Fraction(289770, 289770 + 142513)
    assert abs(math.exp(lp) - float(expected)) < 1e-9
    assert 289770 + 142513 == 432283


def test_output_tags_always_candidates(resources):
    rng = random.Random(7)
    vocab = ["THE", "DOG", "RINGS", "WANT", "TO", "PROJECT", "10", "GOOD"]
    for _ in range(50):
        words = [rng.choice(vocab) for _ in range(rng.randint(1, 7))]
        tags = postag.tag_sentence(words, resources.tagmodel, resources.poslex,
                                   use_overrides=False)
        for w, t in zip(words, tags):
            assert t in postag.candidate_tags(w, resources.poslex)


def test_viterbi_equals_brute_force(resources):
    rng = random.Random(42)
    lex = ListPosLexicon({
        "alpha": "NV", "beta": "VtA", "gamma": "DvN", "delta": "P",
        "epsilon": "NpVA", "zeta": "rV",
    })
    vocab = list(lex.mapping)
    for _ in range(120):
        words = [rng.choice(vocab) for _ in range(rng.randint(1, 5))]
        fast = postag.tag_sentence(words, resources.tagmodel, lex)
        slow = postag.brute_force_tags(words, resources.tagmodel, lex)
        assert fast == slow, words


def test_count_scaling_invariance(resources):
    scaled = TrigramModel()
    for k, v in resources.tagmodel.trigrams.items():
        scaled.trigrams[k] = v * 7
    for k, v in resources.tagmodel.bigrams.items():
        scaled.bigrams[k] = v * 7
    scaled.overrides = dict(resources.tagmodel.overrides)
    rng = random.Random(11)
    vocab = ["THE", "DOG", "RINGS", "WANT", "TO", "PROJECT", "GOOD", "WALL"]
    for _ in range(40):
        words = [rng.choice(vocab) for _ in range(rng.randint(1, 6))]
        assert postag.tag_sentence(words, resources.tagmodel, resources.poslex) \
            == postag.tag_sentence(words, scaled, resources.poslex)


def test_determinism(resources):
    words = "THE DOVE DOVE AWAY FROM ME".split()
    first = postag.tag_sentence(words, resources.tagmodel, resources.poslex)
    for _ in range(5):
        assert postag.tag_sentence(words, resources.tagmodel,
                                   resources.poslex) == first


def test_override_pins_tags(resources):
    model = TrigramModel()
    model.overrides[("ALPHA", "BETA", "GAMMA")] = ("!", "!", "!")
    tags = postag.tag_sentence(["ALPHA", "BETA", "GAMMA"], model, None)
    assert tags == ["!", "!", "!"]


def test_model_round_trip(resources, tmp_path):
    path = tmp_path / "model.tsv"
    with open(path, "w") as f:
        resources.tagmodel.save(f)
    with open(path) as f:
        again = TrigramModel.load(f)
    assert again.trigrams == resources.tagmodel.trigrams
    assert again.bigrams == resources.tagmodel.bigrams
    assert again.overrides == resources.tagmodel.overrides


BROWN_FIXTURE = """\
The/at dog/nn ran/vbd ./.
She/pps saw/vbd the/at old/jj man/nn ./.
They/ppss want/vb a/at good/jj book/nn ./.
I/ppss read/vb the/at word/nn ./.
The/at water/nn is/bez cold/jj ./.
"""


def test_evaluate_brown_reports_accuracy(resources):
    result = postag.evaluate_brown(
        io.StringIO(BROWN_FIXTURE), resources.tagmodel, resources.poslex
    )
    assert result["total"] > 0
    assert 0.0 <= result["accuracy"] <= 1.0
    # Regression pin for the bundled model on this fixture.
    assert result["correct"] >= result["total"] * 0.6


def test_evaluate_brown_degenerate_perfect():
    # A model trained on exactly the distribution it is scored on, with
    # candidates restricted to the gold tag, is trivially perfect.
    lex = ListPosLexicon({"the": "D", "dog": "N", "ran": "V"})
    model = TrigramModel()
    model.trigrams[("D", "N", "V")] = 100
    model.bigrams[("D", "N")] = 100
    result = postag.evaluate_brown(
        io.StringIO("The/at dog/nn ran/vbd ./.\n"), model, lex
    )
    assert result["accuracy"] == 1.0
