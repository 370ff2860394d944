import pytest

from diphonetts.fixture_bank import build_fixture_bank
from diphonetts.pipeline import Engine, Resources

CRITERIA = {
    "test_g2p_oracle_equivalence":
        "G2P oracle equivalence (1000 words, decode == brute force)",
    "test_g2p_accuracy_bands":
        "G2P accuracy bands (exact >= 40%, exact+minor >= 70%)",
    "test_g2p_linear_time":
        "G2P linear-time decode (21 letters < 50 ms)",
    "test_pos_viterbi_oracle_equivalence":
        "POS Viterbi oracle equivalence (200 sentences)",
    "test_pos_worked_example":
        "POS worked example (289770/432283 within 1e-9)",
    "test_psola_laws":
        "PSOLA pitch/duration/identity laws",
    "test_usds_length_law":
        "USDS length law and exact frame patterns",
    "test_extraction_synthetic_fixtures":
        "Extraction on synthetic fixtures (boundary/sustain/distance)",
    "test_end_to_end_determinism_and_rtf":
        "End-to-end determinism + real-time factor on 720 Harvard sentences",
    "test_corpus_integrity":
        "Corpus integrity (DRT/MRT/PB-50/Harvard/Haskins cardinalities)",
    "test_frozen_fixture_regression_hashes":
        "Frozen-fixture regression WAV hashes (listening-study substitute)",
}


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    rows = []
    for outcome, label in (("passed", "PASS"), ("failed", "FAIL"),
                           ("skipped", "SKIP")):
        for report in terminalreporter.stats.get(outcome, []):
            if "test_acceptance" not in report.nodeid:
                continue
            if getattr(report, "when", "call") != "call" and outcome != "skipped":
                continue
            name = report.nodeid.split("::")[-1]
            if name in CRITERIA:
                rows.append((list(CRITERIA).index(name), label, CRITERIA[name]))
    if rows:
        terminalreporter.write_sep("=", "acceptance criteria")
        for _, label, description in sorted(rows):
            terminalreporter.write_line(f"{label}  {description}")


@pytest.fixture(scope="session")
def resources():
    return Resources.bundled()


@pytest.fixture(scope="session")
def bank(tmp_path_factory):
    directory = tmp_path_factory.mktemp("bank")
    return build_fixture_bank(directory)


@pytest.fixture(scope="session")
def bank_dir(tmp_path_factory):
    directory = tmp_path_factory.mktemp("bank_on_disk")
    build_fixture_bank(directory)
    return directory


@pytest.fixture()
def engine(resources, bank):
    return Engine(resources, bank)
