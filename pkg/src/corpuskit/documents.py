"""Document schema and JSONL ingestion."""

import dataclasses
import json
from dataclasses import dataclass

from .errors import DataError, ParseError
from .text import word_count

__all__ = ["Document", "IngestReport", "ingest", "read_jsonl", "write_jsonl",
           "LANGUAGES", "DOC_TYPES", "GENRES"]

LANGUAGES = {"nb", "nn", "da", "sv", "is", "en", "code", "other"}
DOC_TYPES = {"book", "newspaper", "web", "government", "wiki", "code", "other"}
GENRES = {"fiction", "nonfiction", "unknown"}


@dataclass
class Document:
    id: str
    text: str
    source: str = "other"
    language: str = "other"
    doc_type: str = "other"
    genre: str = "unknown"
    original_language: str = "unknown"
    published: str | None = None
    word_count: int = 0
    perplexity: float | None = None
    segment: str | None = None

    def to_json(self):
        d = dataclasses.asdict(self)
        return {k: v for k, v in d.items() if v is not None}

    @classmethod
    def from_json(cls, obj):
        known = {f.name for f in dataclasses.fields(cls)}
        return cls(**{k: v for k, v in obj.items() if k in known})


@dataclass
class IngestReport:
    read: int = 0
    accepted: int = 0
    skipped: list = dataclasses.field(default_factory=list)  # (line, reason)


def _parse_line(obj, line_no):
    if not isinstance(obj, dict):
        raise ParseError("document must be a JSON object", line=line_no)
    if not obj.get("id"):
        raise ParseError("missing or empty id", line=line_no)
    if "text" not in obj or not isinstance(obj["text"], str):
        raise ParseError("missing text", line=line_no)
    doc = Document.from_json(obj)
    if doc.language not in LANGUAGES:
        raise ParseError(f"unknown language {doc.language!r}", line=line_no)
    if doc.doc_type not in DOC_TYPES:
        raise ParseError(f"unknown doc_type {doc.doc_type!r}", line=line_no)
    if doc.genre not in GENRES:
        raise ParseError(f"unknown genre {doc.genre!r}", line=line_no)
    doc.word_count = word_count(doc.text)
    return doc


def ingest(lines, fail_fast=False, report=None):
    """Parse a JSONL line stream into Documents.

    Malformed lines are recorded in the report and skipped, or raised when
    fail_fast is set. Duplicate ids always raise.
    """
    if report is None:
        report = IngestReport()
    seen = set()
    for line_no, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        report.read += 1
        try:
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(f"invalid JSON ({exc.msg})", line=line_no) from None
            doc = _parse_line(obj, line_no)
        except ParseError as exc:
            if fail_fast:
                raise
            report.skipped.append((line_no, str(exc)))
            continue
        if doc.id in seen:
            raise DataError(f"duplicate id {doc.id}")
        seen.add(doc.id)
        report.accepted += 1
        yield doc


def read_jsonl(path, fail_fast=False, report=None):
    with open(path, encoding="utf-8") as fh:
        yield from ingest(fh, fail_fast=fail_fast, report=report)


def write_jsonl(docs, fileobj):
    for doc in docs:
        fileobj.write(json.dumps(doc.to_json(), ensure_ascii=False, sort_keys=True))
        fileobj.write("\n")
