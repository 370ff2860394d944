"""HTTP service exposing the synthesis pipeline.

Endpoints (JSON bodies, UTF-8): POST /preprocess, POST /synthesize (returns
audio/wav, or the prosody plan when plan_only is set), GET/PUT /settings,
GET /banks, GET /health, POST /curves/preview. All shared resources are
read-only after startup; the settings store is replaced atomically under a
lock.
"""

from __future__ import annotations

import threading

from fastapi import FastAPI, HTTPException, Response
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel

from . import prosody
from .audio_io import wav_bytes
from .pipeline import Engine


class SynthesizeRequest(BaseModel):
    text: str
    seed: int | None = None
    settings: dict | None = None
    plan_only: bool = False
    word_overrides: list[dict] | None = None


class PreprocessRequest(BaseModel):
    text: str


class CurvePreviewRequest(BaseModel):
    points: list[list[float]]
    kind: str = "linear"
    xs: list[float] | None = None
    samples: int = 100
    lo: float = 0.0
    hi: float = 1.0


def create_app(engine: Engine) -> FastAPI:
    app = FastAPI(title="diphonetts")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"],
        allow_headers=["*"],
    )
    lock = threading.Lock()

    @app.get("/health")
    def health() -> dict:
        return {
            "status": "ok",
            "bank_loaded": engine.bank is not None,
            "lexicon_entries": len(engine.res.pronunciations),
        }

    @app.get("/banks")
    def banks() -> dict:
        out = []
        if engine.bank is not None:
            out.append({"name": "default", "clips": len(engine.bank.clips)})
        for name, bank in engine.alternate_banks.items():
            out.append({"name": name, "clips": len(bank.clips)})
        return {"banks": out}

    @app.get("/settings")
    def get_settings() -> dict:
        with lock:
            return engine.settings.to_dict()

    @app.put("/settings")
    def put_settings(document: dict) -> dict:
        try:
            parsed = prosody.ProsodySettings.from_dict(document)
        except (KeyError, ValueError, TypeError) as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        with lock:
            engine.settings = parsed
        return engine.settings.to_dict()

    @app.post("/preprocess")
    def preprocess(req: PreprocessRequest) -> dict:
        rows = engine.preprocess(req.text)
        return {
            "tokens": [
                {
                    "text": r.text,
                    "kind": r.kind,
                    "tag": r.tag,
                    "pronunciation": r.pronunciation,
                }
                for r in rows
            ]
        }

    @app.post("/synthesize")
    def synthesize(req: SynthesizeRequest):
        if engine.bank is None:
            raise HTTPException(status_code=503, detail="no diphone bank loaded")
        with lock:
            saved = engine.settings
            if req.settings is not None:
                try:
                    engine.settings = prosody.ProsodySettings.from_dict(req.settings)
                except (KeyError, ValueError, TypeError) as exc:
                    raise HTTPException(status_code=422, detail=str(exc))
            try:
                if req.plan_only:
                    rows = engine.preprocess(req.text)
                    return {
                        "plan": [
                            {"text": r.text, "tag": r.tag,
                             "pronunciation": r.pronunciation}
                            for r in rows
                        ]
                    }
                wav, report = engine.synthesize(
                    req.text, seed=req.seed,
                    word_overrides=req.word_overrides,
                )
            finally:
                engine.settings = saved
        return Response(
            content=wav_bytes(wav, engine.bank.rate),
            media_type="audio/wav",
            headers={
                "X-Clip-Count": str(report.clip_count),
                "X-Substitutions": str(len(report.substitutions)),
                "X-Real-Time-Factor": f"{report.real_time_factor:.4f}",
            },
        )

    @app.post("/curves/preview")
    def curve_preview(req: CurvePreviewRequest) -> dict:
        try:
            curve = prosody.Curve([tuple(p) for p in req.points], req.kind)
        except prosody.CurveError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        if req.xs is not None:
            xs = list(req.xs)
        else:
            n = max(2, req.samples)
            step = (req.hi - req.lo) / (n - 1)
            xs = [req.lo + i * step for i in range(n)]
        return {"xs": xs, "ys": [curve(x) for x in xs]}

    return app


def serve(engine: Engine, host: str = "127.0.0.1", port: int = 8575) -> None:
    import uvicorn

    uvicorn.run(create_app(engine), host=host, port=port, log_level="warning")
