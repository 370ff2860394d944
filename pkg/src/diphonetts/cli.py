"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 data error, 3 audio/IO error.
Configuration precedence: flags > TTS_* environment variables > config
file > defaults.
"""

from __future__ import annotations

import io
import json
import sys
from pathlib import Path

import click

from . import evalsuite, g2p, lexicon, phones, postag, prosody
from .audio_io import WavError, read_wav, write_wav
from .extraction import (
    DiphoneBank,
    ExtractionError,
    SilenceProfile,
    average_spectrum,
    calibrate_silence,
    extract_persistent_diphone,
    extract_stop_diphone,
    section_monophone,
)
from .pipeline import Engine, Resources, load_engine
from .signal_ops import ShiftSpec, detect_pulses, shift_diphone

click.UsageError.exit_code = 1

DATA_ERRORS = (
    lexicon.LexiconError,
    g2p.G2PError,
    postag.ModelError,
    evalsuite.CorpusError,
    prosody.CurveError,
    json.JSONDecodeError,
)
AUDIO_ERRORS = (WavError, ExtractionError, OSError)


def _fail(code: int, message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def run_guarded(fn):
    try:
        fn()
    except DATA_ERRORS as exc:
        _fail(2, str(exc))
    except AUDIO_ERRORS as exc:
        _fail(3, str(exc))


@click.group(context_settings={"auto_envvar_prefix": "TTS"})
@click.option("--config", type=click.Path(exists=True, dir_okay=False),
              default=None, help="JSON config file with default options.")
@click.pass_context
def main(ctx: click.Context, config: str | None) -> None:
    """Diphone-concatenation text-to-speech tools."""
    defaults: dict = {}
    if config:
        with open(config, encoding="utf-8") as f:
            defaults = json.load(f)
    ctx.default_map = {cmd: defaults for cmd in main.commands}


@main.command("train-g2p")
@click.argument("cmudict", type=click.Path(exists=True, dir_okay=False))
@click.option("-o", "--output", type=click.Path(), required=True)
def train_g2p(cmudict: str, output: str) -> None:
    """Train a graphone table from a CMUdict-format file."""
    def run() -> None:
        with open(cmudict, encoding="utf-8") as f:
            lex = lexicon.load_cmudict(f)
        table, stats = g2p.train_from_lexicon(lex)
        with open(output, "w", encoding="utf-8") as f:
            table.save(f)
        for key, value in stats.items():
            click.echo(f"{key}: {value}")
    run_guarded(run)


@main.command("g2p")
@click.argument("word")
@click.option("--table", "table_path", type=click.Path(exists=True),
              default=None, help="Trained table (default: train on bundled lexicon).")
def g2p_cmd(word: str, table_path: str | None) -> None:
    """Pronounce a word with the grapheme-to-phoneme rules."""
    def run() -> None:
        if table_path:
            with open(table_path, encoding="utf-8") as f:
                table = g2p.GraphoneTable.load(f)
        else:
            table = Resources.bundled().graphones
        result = g2p.decode(table, word)
        click.echo(" ".join(result.phones))
    run_guarded(run)


@main.command("eval-g2p")
@click.argument("cmudict", type=click.Path(exists=True, dir_okay=False))
def eval_g2p(cmudict: str) -> None:
    """Train on a dictionary and report decode accuracy against it."""
    def run() -> None:
        with open(cmudict, encoding="utf-8") as f:
            lex = lexicon.load_cmudict(f)
        table, stats = g2p.train_from_lexicon(lex)
        report = g2p.evaluate(table, lex)
        click.echo(f"words: {report.total}")
        for key, value in report.percentages().items():
            click.echo(f"{key}: {value:.2f}%")
        for key, value in stats.items():
            click.echo(f"{key}: {value}")
    run_guarded(run)


@main.command()
@click.argument("sentence")
def tag(sentence: str) -> None:
    """Part-of-speech tag a sentence."""
    def run() -> None:
        res = Resources.bundled()
        words = sentence.split()
        tags = postag.tag_sentence(words, res.tagmodel, res.poslex)
        click.echo(" ".join(f"{w}/{t}" for w, t in zip(words, tags)))
    run_guarded(run)


@main.command()
@click.argument("text")
def preprocess(text: str) -> None:
    """Print the token / tag / pronunciation table for an input string."""
    def run() -> None:
        engine = Engine(Resources.bundled())
        for row in engine.preprocess(text):
            pron = " ".join(row.pronunciation)
            click.echo(f"{row.text}\t{row.kind}\t{row.tag or ''}\t{pron}")
    run_guarded(run)


@main.command()
@click.argument("text")
@click.option("-o", "--output", type=click.Path(), required=True)
@click.option("--bank", type=click.Path(exists=True, file_okay=False),
              required=True)
@click.option("--settings", "settings_path", type=click.Path(exists=True),
              default=None)
@click.option("--seed", type=int, default=None)
def say(text: str, output: str, bank: str, settings_path: str | None,
        seed: int | None) -> None:
    """Synthesize text to a WAV file."""
    def run() -> None:
        engine = load_engine(bank, settings_path)
        wav, report = engine.synthesize(text, seed=seed)
        write_wav(output, wav, engine.bank.rate)
        click.echo(
            f"wrote {output}: {report.audio_seconds:.2f}s audio, "
            f"{report.clip_count} clips, rtf {report.real_time_factor:.3f}"
        )
        for sub in report.substitutions:
            click.echo(f"substituted: {sub}")
    run_guarded(run)


@main.command()
@click.option("--port", type=int, default=8575)
@click.option("--host", default="127.0.0.1")
@click.option("--bank", type=click.Path(exists=True, file_okay=False),
              default=None)
@click.option("--settings", "settings_path", type=click.Path(exists=True),
              default=None)
def serve(port: int, host: str, bank: str | None,
          settings_path: str | None) -> None:
    """Run the HTTP synthesis service."""
    def run() -> None:
        from .service import serve as run_service

        engine = load_engine(bank, settings_path)
        run_service(engine, host=host, port=port)
    run_guarded(run)


@main.command()
@click.argument("silence_wav", type=click.Path(exists=True, dir_okay=False))
@click.option("-o", "--output", type=click.Path(), default="silence_profile.json")
def calibrate(silence_wav: str, output: str) -> None:
    """Measure silence thresholds from an ambient recording."""
    def run() -> None:
        samples, _ = read_wav(silence_wav)
        profile = calibrate_silence(samples)
        Path(output).write_text(json.dumps({
            "amplitude_threshold": profile.amplitude_threshold,
            "rms_threshold": profile.rms_threshold,
        }, indent=2))
        click.echo(f"amplitude_threshold: {profile.amplitude_threshold:.6g}")
        click.echo(f"rms_threshold: {profile.rms_threshold:.6g}")
    run_guarded(run)


def _load_profile(path: str) -> SilenceProfile:
    data = json.loads(Path(path).read_text())
    return SilenceProfile(data["amplitude_threshold"], data["rms_threshold"])


@main.command("extract-mono")
@click.argument("wav_path", type=click.Path(exists=True, dir_okay=False))
@click.argument("phone")
@click.option("--profile", type=click.Path(exists=True), required=True)
@click.option("-o", "--out-dir", type=click.Path(), default="monophones")
def extract_mono(wav_path: str, phone: str, profile: str, out_dir: str) -> None:
    """Section a monophone recording into onset / sustain / offset."""
    def run() -> None:
        samples, rate = read_wav(wav_path)
        record = section_monophone(samples, phone.upper(), _load_profile(profile), rate)
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        if record.burst is not None:
            write_wav(out / f"{phone.upper()}-burst.wav", record.burst, rate)
            click.echo(f"stop burst: {len(record.burst)} samples")
        else:
            for name in ("onset", "sustain", "offset"):
                part = getattr(record, name)
                write_wav(out / f"{phone.upper()}-{name}.wav", part, rate)
                click.echo(f"{name}: {len(part)} samples")
        for w in record.warnings:
            click.echo(f"warning: {w}", err=True)
    run_guarded(run)


@main.command("extract-di")
@click.argument("wav_path", type=click.Path(exists=True, dir_okay=False))
@click.argument("phone1")
@click.argument("phone2")
@click.option("--profile", type=click.Path(exists=True), required=True)
@click.option("--sustains", type=click.Path(exists=True, file_okay=False),
              required=True, help="Directory of <PHONE>-sustain.wav recordings.")
@click.option("-o", "--output", type=click.Path(), default=None)
def extract_di(wav_path: str, phone1: str, phone2: str, profile: str,
               sustains: str, output: str | None) -> None:
    """Extract a diphone transition from a prompted recording."""
    def run() -> None:
        p1, p2 = phone1.upper(), phone2.upper()
        samples, rate = read_wav(wav_path)
        prof = _load_profile(profile)
        spectra = {}
        for p in (p1, p2):
            if p == phones.SILENCE:
                continue
            sustain, srate = read_wav(Path(sustains) / f"{p}-sustain.wav")
            spectra[p] = average_spectrum(sustain, srate)
        if phones.category(p1) is phones.Category.STOP:
            clip, warns = extract_stop_diphone(samples, p1, p2, prof, spectra, rate)
            for w in warns:
                click.echo(f"warning: {w}", err=True)
        else:
            clip = extract_persistent_diphone(samples, p1, p2, prof, spectra, rate)
        dest = output or f"{p1}-{p2}.wav"
        write_wav(dest, clip, rate)
        click.echo(f"wrote {dest}: {len(clip)} samples")
    run_guarded(run)


@main.command("bank-check")
@click.argument("bank_dir", type=click.Path(exists=True, file_okay=False))
def bank_check(bank_dir: str) -> None:
    """Report missing diphones in a bank directory."""
    def run() -> None:
        bank = DiphoneBank.load(bank_dir)
        missing = bank.missing()
        click.echo(f"clips: {len(bank.clips)}  bursts: {len(bank.bursts)}")
        if missing:
            click.echo(f"missing {len(missing)}:")
            for a, b in missing:
                click.echo(f"  {a} {b}")
        else:
            click.echo("bank complete")
    run_guarded(run)


@main.command("make-fixture-bank")
@click.argument("bank_dir", type=click.Path())
def make_fixture_bank(bank_dir: str) -> None:
    """Generate a complete synthetic diphone bank (no recordings needed)."""
    def run() -> None:
        from .fixture_bank import build_fixture_bank

        bank = build_fixture_bank(bank_dir)
        click.echo(f"wrote {len(bank.clips)} clips and {len(bank.bursts)} "
                   f"bursts to {bank_dir}")
    run_guarded(run)


@main.command("gen-test")
@click.option("--kind", type=click.Choice(["harvard", "drt", "mrt", "pb50",
                                           "haskins", "mosx"]), required=True)
@click.option("--list", "list_number", type=int, default=1)
@click.option("--bank", type=click.Path(exists=True, file_okay=False),
              required=False)
@click.option("--settings", "settings_path", type=click.Path(exists=True),
              default=None)
@click.option("-o", "--out-dir", type=click.Path(), default="test_prompts")
@click.option("--seed", type=int, default=0)
def gen_test(kind: str, list_number: int, bank: str | None,
             settings_path: str | None, out_dir: str, seed: int) -> None:
    """Generate an intelligibility test: WAVs, answer key, score sheet."""
    def run() -> None:
        if kind == "mosx":
            Path(out_dir).mkdir(parents=True, exist_ok=True)
            form = Path(out_dir) / "mosx_form.txt"
            form.write_text(evalsuite.mosx_form(), encoding="utf-8")
            click.echo(f"wrote {form}")
            return
        if not bank:
            raise click.UsageError("--bank is required for audio test kinds")
        engine = load_engine(bank, settings_path)
        prompts = evalsuite.run_suite(engine, kind, out_dir, list_number, seed)
        click.echo(f"wrote {len(prompts)} prompts to {out_dir}")
    run_guarded(run)


@main.command()
@click.option("--ref", "ref_path", type=click.Path(exists=True), required=True,
              help="Answer key TSV (name, prompt, answer).")
@click.option("--hyp", "hyp_path", type=click.Path(exists=True), required=True,
              help="Transcripts TSV (name, transcript).")
def score(ref_path: str, hyp_path: str) -> None:
    """Score transcripts against an answer key (keyword match)."""
    def run() -> None:
        refs: dict[str, tuple[str, str]] = {}
        for line in Path(ref_path).read_text(encoding="utf-8").splitlines():
            if not line or line.startswith("#"):
                continue
            name, prompt, answer = line.split("\t")
            refs[name] = (prompt, answer)
        correct_total = 0
        keyword_total = 0
        for line in Path(hyp_path).read_text(encoding="utf-8").splitlines():
            if not line or line.startswith("#"):
                continue
            name, _, transcript = line.partition("\t")
            if name not in refs:
                continue
            _, answer = refs[name]
            correct, total = evalsuite.score_transcription(
                answer, transcript, keywords=answer.split()
            )
            correct_total += correct
            keyword_total += total
            click.echo(f"{name}\t{correct}/{total}")
        pct = 100.0 * correct_total / keyword_total if keyword_total else 0.0
        click.echo(f"total\t{correct_total}/{keyword_total}\t{pct:.1f}%")
    run_guarded(run)


@main.command("shift-demo")
@click.argument("clip", type=click.Path(exists=True, dir_okay=False))
@click.option("--pitch", default="1,1", help="start,end pitch multipliers")
@click.option("--dur", default="1,1", help="start,end duration multipliers")
@click.option("--phones", "pair", default="AA,AA",
              help="endpoint phones, e.g. Y,F")
@click.option("-o", "--out-prefix", default="shift_demo")
def shift_demo(clip: str, pitch: str, dur: str, pair: str,
               out_prefix: str) -> None:
    """Shift a clip and write before/after WAVs plus a boundary report."""
    def run() -> None:
        samples, rate = read_wav(clip)
        p_lo, p_hi = (float(x) for x in pitch.split(","))
        d_lo, d_hi = (float(x) for x in dur.split(","))
        p1, p2 = (p.strip().upper() for p in pair.split(","))
        spec = ShiftSpec(pitch=(p_lo, p_hi), duration=(d_lo, d_hi))
        shifted, warns = shift_diphone(samples, p1, p2, spec, rate=rate)
        write_wav(f"{out_prefix}_before.wav", samples, rate)
        write_wav(f"{out_prefix}_after.wav", shifted, rate)
        lines = [
            f"input: {clip}",
            f"samples_in: {len(samples)}",
            f"samples_out: {len(shifted)}",
            f"pitch: {p_lo} -> {p_hi}",
            f"duration: {d_lo} -> {d_hi}",
            f"phones: {p1} {p2}",
        ]
        try:
            peaks = detect_pulses(samples, rate=rate)
            lines.append(f"pulses: {len(peaks)}")
            lines.append("pulse_samples: " + " ".join(str(int(p)) for p in peaks))
        except Exception as exc:
            lines.append(f"pulses: none ({exc})")
        for w in warns:
            lines.append(f"warning: {w}")
        report = Path(f"{out_prefix}_report.txt")
        report.write_text("\n".join(lines) + "\n", encoding="utf-8")
        click.echo(f"wrote {out_prefix}_before.wav, {out_prefix}_after.wav, {report}")
    run_guarded(run)


if __name__ == "__main__":
    main()
