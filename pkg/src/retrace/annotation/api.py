"""HTTP API for the annotation workbench.

Serves the annotation queue, citation contexts with decision-tree
state, annotation writes, the tree config, visualization bundles, and
(optionally) the built workbench assets.
"""

from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, HTTPException, Query
from fastapi.responses import FileResponse, JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from ..errors import DomainError
from .store import AnnotationStore
from .tree import CitoDecisionTree


class AnnotationIn(BaseModel):
    sentiment: str
    intent: str
    mentions_retraction: bool
    annotator: str


def create_app(
    store: AnnotationStore,
    tree: CitoDecisionTree | None = None,
    exports_dir: str | Path | None = None,
    ui_dir: str | Path | None = None,
) -> FastAPI:
    tree = tree or CitoDecisionTree.default()
    exports = Path(exports_dir) if exports_dir else None
    app = FastAPI(title="retrace annotation API")

    @app.get("/api/health")
    def health() -> dict:
        return {"status": "ok"}

    @app.get("/api/queue")
    def queue() -> dict:
        return {"pending": store.unannotated_ids()}

    @app.get("/api/citations/{citation_id}")
    def get_citation(citation_id: str) -> dict:
        if store.citations is None or citation_id not in store.citations:
            raise HTTPException(status_code=404, detail=f"unknown citation {citation_id}")
        latest = store.latest().get(citation_id)
        return {
            "citation": store.citations[citation_id].to_dict(),
            "annotation": latest.to_dict() if latest else None,
            "history_length": len(store.history(citation_id)),
        }

    @app.put("/api/citations/{citation_id}/annotation")
    def put_annotation(citation_id: str, body: AnnotationIn) -> dict:
        if store.citations is not None and citation_id not in store.citations:
            raise HTTPException(status_code=404, detail=f"unknown citation {citation_id}")
        try:
            rec = store.record(
                citation_id=citation_id,
                sentiment=body.sentiment,
                intent=body.intent,
                mentions_retraction=body.mentions_retraction,
                annotator=body.annotator,
            )
        except DomainError as exc:
            return JSONResponse(
                status_code=422,
                content={"detail": [{"loc": ["body"], "msg": str(exc)}]},
            )
        return {"record": rec.to_dict()}

    @app.get("/api/decision-tree")
    def decision_tree() -> dict:
        return tree.to_dict()

    @app.get("/api/tree/resolve")
    def tree_resolve(path: list[str] = Query(default=[])) -> dict:
        try:
            return tree.traverse(path or []).to_dict()
        except DomainError as exc:
            raise HTTPException(status_code=422, detail=str(exc))

    @app.get("/api/bundles")
    def list_bundles() -> dict:
        if exports is None or not exports.exists():
            return {"bundles": []}
        return {"bundles": sorted(
            str(p.relative_to(exports)) for p in exports.rglob("*.json")
        )}

    @app.get("/api/bundles/{name:path}")
    def get_bundle(name: str):
        if exports is None:
            raise HTTPException(status_code=404, detail="no exports directory configured")
        path = (exports / name).resolve()
        if not str(path).startswith(str(exports.resolve())) or not path.is_file():
            raise HTTPException(status_code=404, detail=f"no bundle named {name}")
        return FileResponse(path)

    if ui_dir is not None:
        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="workbench")

    return app
