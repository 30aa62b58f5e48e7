"""HTTP review service for adjudicating human-model discrepancies.

Single-analyst tool: binds to loopback by default, no auth.  Adjudications
are written ahead to an append-only JSONL log per run (one line per
decision), so a crash loses nothing; export writes a compacted state
snapshot next to the log.  Each discrepancy carries a revision counter;
adjudicate is last-write-wins guarded by that counter, every other endpoint
is idempotent.
"""

from __future__ import annotations

import errno
import json
import threading
from pathlib import Path

from fastapi import FastAPI, HTTPException, Query
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from ..corpus.store import load_corpus
from ..evaluator.discrepancy import TAXONOMY, TAXONOMY_LABELS
from .corrected import UnadjudicatedRemaining, export_corrected_corpus


class AddressInUse(OSError):
    pass


class CorruptReport(ValueError):
    pass


class AdjudicationBody(BaseModel):
    decision: str
    revision: int
    taxonomy_labels: list[str] = []
    edited_span: tuple[int, int] | None = None


class ExportBody(BaseModel):
    force: bool = False


_DECISIONS = ("keep_gold", "accept_model", "edited")


class ReviewStore:
    """Disk-backed state: discrepancy reports plus per-run adjudication logs."""

    def __init__(self, output_dir: Path):
        self.output_dir = Path(output_dir)
        self.reports_dir = self.output_dir / "reports" / "discrepancies"
        self.log_dir = self.output_dir / "review"
        self.log_dir.mkdir(parents=True, exist_ok=True)
        self._locks: dict[str, threading.Lock] = {}
        self._master_lock = threading.Lock()

    def run_ids(self) -> list[str]:
        if not self.reports_dir.is_dir():
            return []
        return sorted(p.stem for p in self.reports_dir.glob("*.json"))

    def load_report(self, run_id: str) -> dict:
        path = self.reports_dir / f"{run_id}.json"
        if not path.exists():
            raise KeyError(run_id)
        try:
            return json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise CorruptReport(f"{path.name}: {exc}") from exc

    def _log_path(self, run_id: str) -> Path:
        return self.log_dir / f"{run_id}.jsonl"

    def adjudications(self, run_id: str) -> dict[int, dict]:
        """Fold the append-only log; the last entry per index wins and the
        entry count per index is its revision."""
        state: dict[int, dict] = {}
        path = self._log_path(run_id)
        if not path.exists():
            return state
        for line in path.read_text(encoding="utf-8").splitlines():
            if not line.strip():
                continue
            try:
                entry = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorruptReport(f"{path.name}: {exc}") from exc
            index = entry["index"]
            previous = state.get(index, {"revision": 0})
            entry["revision"] = previous["revision"] + 1
            state[index] = entry
        return state

    def _lock_for(self, run_id: str) -> threading.Lock:
        with self._master_lock:
            return self._locks.setdefault(run_id, threading.Lock())

    def adjudicate(self, run_id: str, index: int, body: AdjudicationBody) -> dict:
        report = self.load_report(run_id)
        if not 0 <= index < len(report["discrepancies"]):
            raise KeyError(index)
        if body.decision not in _DECISIONS:
            raise ValueError(f"decision must be one of {_DECISIONS}")
        unknown = [lbl for lbl in body.taxonomy_labels if lbl not in TAXONOMY]
        if unknown:
            raise ValueError(f"unknown taxonomy labels: {unknown}")
        if body.decision == "edited" and body.edited_span is None:
            raise ValueError("edited decision requires edited_span")
        with self._lock_for(run_id):
            current = self.adjudications(run_id).get(index, {"revision": 0})
            if body.revision != current["revision"]:
                raise RevisionConflict(current["revision"])
            entry = {
                "index": index,
                "decision": body.decision,
                "taxonomy_labels": body.taxonomy_labels,
                "edited_span": list(body.edited_span) if body.edited_span else None,
            }
            with self._log_path(run_id).open("a", encoding="utf-8") as fh:
                fh.write(json.dumps(entry, sort_keys=True) + "\n")
                fh.flush()
            entry["revision"] = current["revision"] + 1
            return entry

    def items(self, run_id: str, state: str = "all") -> list[dict]:
        report = self.load_report(run_id)
        decisions = self.adjudications(run_id)
        items = []
        for disc in report["discrepancies"]:
            index = disc["index"]
            decision = decisions.get(index)
            item = {
                **disc,
                "adjudication": decision["decision"] if decision else "open",
                "taxonomy_labels": decision["taxonomy_labels"] if decision else [],
                "edited_span": (decision or {}).get("edited_span"),
                "revision": decision["revision"] if decision else 0,
            }
            if state == "open" and item["adjudication"] != "open":
                continue
            if state == "adjudicated" and item["adjudication"] == "open":
                continue
            items.append(item)
        return items

    def tallies(self, run_id: str) -> dict:
        report = self.load_report(run_id)
        decisions = self.adjudications(run_id)
        by_label: dict[str, dict[str, int]] = {}
        by_kind: dict[str, int] = {"false_negative": 0, "false_positive": 0}
        adjudicated = 0
        for disc in report["discrepancies"]:
            decision = decisions.get(disc["index"])
            if not decision:
                continue
            adjudicated += 1
            by_kind[disc["kind"]] += 1
            for label in decision["taxonomy_labels"]:
                cell = by_label.setdefault(
                    label, {"false_negative": 0, "false_positive": 0}
                )
                cell[disc["kind"]] += 1
        return {
            "total": len(report["discrepancies"]),
            "adjudicated": adjudicated,
            "open": len(report["discrepancies"]) - adjudicated,
            "by_kind": by_kind,
            "by_label": {k: by_label[k] for k in sorted(by_label)},
        }

    def export(self, run_id: str, force: bool) -> dict:
        report = self.load_report(run_id)
        decisions = self.adjudications(run_id)
        adjudication_map = {
            i: {"decision": d["decision"], "edited_span": d.get("edited_span")}
            for i, d in decisions.items()
        }
        corpus = load_corpus(self._corpus_path())
        out_dir = self.output_dir / "corrected" / run_id
        export_corrected_corpus(report, adjudication_map, corpus, out_dir, force=force)
        snapshot = {str(i): decisions[i] for i in sorted(decisions)}
        (self.log_dir / f"{run_id}.state.json").write_text(
            json.dumps(snapshot, indent=1, sort_keys=True) + "\n", encoding="utf-8"
        )
        return {
            "path": str(out_dir.relative_to(self.output_dir)),
            "tallies": self.tallies(run_id),
        }

    def _corpus_path(self) -> Path:
        snapshot = self.output_dir / "config.json"
        if not snapshot.exists():
            raise FileNotFoundError(f"no config snapshot at {snapshot}")
        return Path(json.loads(snapshot.read_text(encoding="utf-8"))["corpus_path"])


class RevisionConflict(ValueError):
    def __init__(self, current_revision: int):
        super().__init__(f"stale revision; current is {current_revision}")
        self.current_revision = current_revision


def create_app(output_dir: str | Path, ui_dir: str | Path | None = None) -> FastAPI:
    store = ReviewStore(Path(output_dir))
    app = FastAPI(title="annotation review")
    app.state.store = store

    @app.get("/taxonomy")
    def taxonomy() -> dict:
        return {"slugs": list(TAXONOMY), "labels": TAXONOMY_LABELS}

    @app.get("/runs")
    def runs() -> list[dict]:
        out = []
        for run_id in store.run_ids():
            t = store.tallies(run_id)
            out.append({
                "run_id": run_id,
                "total": t["total"],
                "open": t["open"],
                "adjudicated": t["adjudicated"],
            })
        return out

    @app.get("/runs/{run_id}/discrepancies")
    def discrepancies(run_id: str, state: str = Query("all")) -> list[dict]:
        try:
            return store.items(run_id, state)
        except KeyError:
            raise HTTPException(404, f"unknown run {run_id}")

    @app.get("/runs/{run_id}/tallies")
    def tallies_endpoint(run_id: str) -> dict:
        try:
            return store.tallies(run_id)
        except KeyError:
            raise HTTPException(404, f"unknown run {run_id}")

    @app.post("/runs/{run_id}/discrepancies/{index}/adjudicate")
    def adjudicate(run_id: str, index: int, body: AdjudicationBody) -> dict:
        try:
            return store.adjudicate(run_id, index, body)
        except KeyError as exc:
            raise HTTPException(404, f"unknown run or discrepancy: {exc}")
        except RevisionConflict as exc:
            raise HTTPException(
                409, {"error": "revision conflict", "current_revision": exc.current_revision}
            )
        except ValueError as exc:
            raise HTTPException(400, str(exc))

    @app.get("/runs/{run_id}/documents/{doc_id}/context")
    def context(run_id: str, doc_id: str, center: int, width: int = 6) -> dict:
        try:
            report = store.load_report(run_id)
        except KeyError:
            raise HTTPException(404, f"unknown run {run_id}")
        doc = report["documents"].get(doc_id)
        if doc is None:
            raise HTTPException(404, f"unknown document {doc_id}")
        tokens = doc["tokens"]
        if not 0 <= center < len(tokens):
            raise HTTPException(400, f"center token {center} out of range")
        lo, hi = max(0, center - width), min(len(tokens), center + width + 1)
        return {
            "doc_id": doc_id,
            "center": center,
            "width": width,
            "tokens": [
                {
                    "index": i,
                    "start": tokens[i][0],
                    "end": tokens[i][1],
                    "surface": doc["text"][tokens[i][0]:tokens[i][1]],
                    "gold": bool(doc["gold"][i]),
                    "pred": bool(doc["pred"][i]),
                    "masked": bool(doc["mask"][i]),
                }
                for i in range(lo, hi)
            ],
        }

    @app.post("/runs/{run_id}/export")
    def export(run_id: str, body: ExportBody) -> dict:
        try:
            return store.export(run_id, force=body.force)
        except KeyError:
            raise HTTPException(404, f"unknown run {run_id}")
        except UnadjudicatedRemaining as exc:
            raise HTTPException(409, {"error": str(exc), "remaining_open": exc.count})
        except ValueError as exc:
            raise HTTPException(400, str(exc))

    if ui_dir is not None and Path(ui_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")
    return app


def _check_bindable(host: str, port: int) -> None:
    import socket

    probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    try:
        probe.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        probe.bind((host, port))
    except OSError as exc:
        if exc.errno == errno.EADDRINUSE:
            raise AddressInUse(f"address {host}:{port} already in use") from exc
        raise
    finally:
        probe.close()


def serve_review(
    output_dir: str | Path,
    address: str = "127.0.0.1:8765",
    ui_dir: str | Path | None = None,
) -> None:
    """Run the review API (and static UI when built) until interrupted."""
    import uvicorn

    host, _, port = address.partition(":")
    host = host or "127.0.0.1"
    port_number = int(port or 8765)
    _check_bindable(host, port_number)
    app = create_app(output_dir, ui_dir)
    uvicorn.run(app, host=host, port=port_number, log_level="info")
