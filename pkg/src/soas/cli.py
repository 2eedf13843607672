"""Operator command line: serve, ingest, one-shot query, REPL, index admin.

Exit codes: 0 success, 1 pipeline or data error, 2 usage error, 3 I/O
error.  One-shot `query` output is byte-identical to the HTTP body the
service would return for the same store and text, so no trailing newline
is added in natural mode.
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import StorageError
from .pipeline import Pipeline, PipelineError, RawRequest
from .store import DocumentStore, IngestOutcome, parse_record_line

DEFAULT_DATA_DIR = "./data"


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="soas",
        description="Semantic-oriented search service over a controlled query language.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    serve_p = sub.add_parser("serve", help="run the HTTP service")
    serve_p.add_argument("--port", type=int, default=7034)
    serve_p.add_argument("--host", default="127.0.0.1")
    serve_p.add_argument("--data-dir", default=DEFAULT_DATA_DIR)

    ingest_p = sub.add_parser("ingest", help="load an NDJSON corpus file")
    ingest_p.add_argument("file")
    ingest_p.add_argument("--data-dir", default=DEFAULT_DATA_DIR)

    query_p = sub.add_parser("query", help="run one query against the local store")
    query_p.add_argument("text")
    query_p.add_argument("--mode", choices=["natural", "digital"], default="natural")
    query_p.add_argument("--trace", action="store_true")
    query_p.add_argument("--data-dir", default=DEFAULT_DATA_DIR)

    repl_p = sub.add_parser("repl", help="interactive query loop")
    repl_p.add_argument("--data-dir", default=DEFAULT_DATA_DIR)

    index_p = sub.add_parser("index", help="index administration")
    index_p.add_argument("action", choices=["rebuild", "stats"])
    index_p.add_argument("--data-dir", default=DEFAULT_DATA_DIR)

    return parser


def _open_store(data_dir: str) -> DocumentStore:
    return DocumentStore(data_dir)


def _render_digital(payload: dict) -> str:
    # compact separators match the HTTP JSON body byte for byte
    return json.dumps(payload, ensure_ascii=False, separators=(",", ":"))


def _format_error(err: PipelineError) -> str:
    if err.offset is not None:
        return f"error at stage {err.stage.value} (offset {err.offset}): {err.message}"
    return f"error at stage {err.stage.value}: {err.message}"


def _print_trace(trace, file) -> None:
    for e in trace.envelopes:
        print(f"{e.seq} {e.stage.value} {e.elapsed_micros}us {e.summary}", file=file)


def _cmd_serve(args) -> int:
    import uvicorn

    from .api import create_app

    if not 1 <= args.port <= 65535:
        print(f"error: port {args.port} out of range 1-65535", file=sys.stderr)
        return 2
    store = _open_store(args.data_dir)
    app = create_app(store)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


def _cmd_ingest(args) -> int:
    try:
        with open(args.file, encoding="utf-8") as fh:
            lines = fh.read().split("\n")
    except OSError as exc:
        print(f"error: cannot read {args.file}: {exc}", file=sys.stderr)
        return 3
    docs = []
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            docs.append(parse_record_line(line))
        except ValueError as exc:
            print(f"error: line {lineno}: {exc}", file=sys.stderr)
            return 1
    store = _open_store(args.data_dir)
    created = replaced = 0
    for doc in docs:
        if store.ingest(doc) is IngestOutcome.CREATED:
            created += 1
        else:
            replaced += 1
    print(f"created={created} replaced={replaced}")
    return 0


def _cmd_query(args) -> int:
    store = _open_store(args.data_dir)
    pipeline = Pipeline(store)
    outcome, trace = pipeline.run(RawRequest(text=args.text, mode=args.mode))
    if args.trace:
        _print_trace(trace, sys.stderr)
    if isinstance(outcome, PipelineError):
        print(_format_error(outcome), file=sys.stderr)
        return 1
    if args.mode == "natural":
        sys.stdout.write(outcome.natural_text)
    else:
        sys.stdout.write(_render_digital(outcome.structured_payload))
    sys.stdout.flush()
    return 0


def _cmd_repl(args) -> int:
    store = _open_store(args.data_dir)
    pipeline = Pipeline(store)
    mode = "natural"
    trace = False
    while True:
        sys.stdout.write("soas> ")
        sys.stdout.flush()
        line = sys.stdin.readline()
        if not line:
            break
        line = line.strip()
        if not line:
            continue
        if line.startswith("."):
            parts = line.split()
            if parts[0] == ".quit":
                break
            if parts[0] == ".mode" and len(parts) == 2 and parts[1] in ("natural", "digital"):
                mode = parts[1]
            elif parts[0] == ".trace" and len(parts) == 2 and parts[1] in ("on", "off"):
                trace = parts[1] == "on"
            else:
                print(
                    "commands: .mode natural|digital  .trace on|off  .quit",
                    file=sys.stderr,
                )
            continue
        outcome, tr = pipeline.run(RawRequest(text=line, mode=mode))
        if trace:
            _print_trace(tr, sys.stderr)
        if isinstance(outcome, PipelineError):
            print(_format_error(outcome), file=sys.stderr)
            continue
        if mode == "natural":
            print(outcome.natural_text)
        else:
            print(_render_digital(outcome.structured_payload))
    return 0


def _cmd_index(args) -> int:
    store = _open_store(args.data_dir)
    if args.action == "rebuild":
        store.rebuild_index()
        stats = store.stats()
        print(f"rebuilt index: {stats.documents} document(s), {stats.terms} term(s)")
    else:
        stats = store.stats()
        print(f"documents={stats.documents} terms={stats.terms}")
    return 0


_COMMANDS = {
    "serve": _cmd_serve,
    "ingest": _cmd_ingest,
    "query": _cmd_query,
    "repl": _cmd_repl,
    "index": _cmd_index,
}


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except StorageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except KeyboardInterrupt:
        return 130


if __name__ == "__main__":
    sys.exit(main())
