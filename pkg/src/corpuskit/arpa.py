"""ARPA-layout model files.

Layout: optional ``#`` metadata preamble, ``\\data\\`` header with per-order
counts, one ``\\N-grams:`` section per order with
``log10prob<TAB>n-gram[<TAB>log10backoff]`` lines, ``\\end\\``. UTF-8, LF.
Probabilities are written with repr-level precision so a round-trip is exact.
"""

import io
import re

from .errors import ParseError
from .ngram import BOS, EOS, UNK, KneserNeyLM

__all__ = ["save", "load", "dumps", "loads"]

_NGRAM_RE = re.compile(r"^ngram (\d+)=(\d+)$")


def _format_float(x):
    return repr(float(x))


def save(model, fileobj):
    """Write a trained model as ARPA text to a file object."""
    by_order = {}
    for gram, (logp, bow) in model.entries_.items():
        by_order.setdefault(len(gram), []).append((gram, logp, bow))
    meta = {
        "order": model.order,
        "normalize": int(bool(model.normalize)),
        "documents": model.n_documents_,
        "tokens": model.n_tokens_,
        "discounts": ",".join(_format_float(d) for d in model.discounts_),
    }
    fileobj.write("# corpuskit " + " ".join(f"{k}={v}" for k, v in meta.items()) + "\n")
    fileobj.write("\\data\\\n")
    for k in range(1, model.order + 1):
        fileobj.write(f"ngram {k}={len(by_order.get(k, []))}\n")
    for k in range(1, model.order + 1):
        fileobj.write(f"\n\\{k}-grams:\n")
        for gram, logp, bow in sorted(by_order.get(k, [])):
            line = f"{_format_float(logp)}\t{' '.join(gram)}"
            if bow is not None:
                line += f"\t{_format_float(bow)}"
            fileobj.write(line + "\n")
    fileobj.write("\n\\end\\\n")


def dumps(model):
    buf = io.StringIO()
    save(model, buf)
    return buf.getvalue()


def _parse_meta(line):
    meta = {}
    for field in line[len("# corpuskit") :].split():
        key, _, value = field.partition("=")
        meta[key] = value
    return meta


def load(fileobj):
    """Parse an ARPA file into a queryable model.

    Raises ParseError naming the offending line on malformed input.
    """
    lines = fileobj.read().split("\n")
    meta = {}
    i = 0
    # preamble: comments and blank lines before \data\
    while i < len(lines):
        line = lines[i]
        if line.startswith("\\data\\"):
            break
        if line.startswith("# corpuskit"):
            meta = _parse_meta(line)
        elif line.strip() and not line.startswith("#"):
            raise ParseError("missing header", line=i + 1)
        i += 1
    else:
        raise ParseError("missing header")
    i += 1

    declared = {}
    while i < len(lines) and lines[i].strip():
        m = _NGRAM_RE.match(lines[i].strip())
        if not m:
            raise ParseError("malformed count declaration", line=i + 1)
        declared[int(m.group(1))] = int(m.group(2))
        i += 1
    if not declared:
        raise ParseError("empty count declaration", line=i + 1)
    order = max(declared)
    if sorted(declared) != list(range(1, order + 1)):
        raise ParseError("non-contiguous n-gram orders in header")

    entries = {}
    for k in range(1, order + 1):
        # seek section header
        while i < len(lines) and not lines[i].strip():
            i += 1
        if i >= len(lines) or lines[i].strip() != f"\\{k}-grams:":
            raise ParseError(f"missing \\{k}-grams: section", line=i + 1)
        i += 1
        seen = 0
        while i < len(lines):
            line = lines[i]
            if not line.strip():
                break
            fields = line.split("\t")
            if len(fields) not in (2, 3):
                raise ParseError("malformed entry", line=i + 1)
            try:
                logp = float(fields[0])
                bow = float(fields[2]) if len(fields) == 3 else None
            except ValueError:
                raise ParseError("non-numeric probability", line=i + 1) from None
            gram = tuple(fields[1].split(" "))
            if len(gram) != k:
                raise ParseError(f"{len(gram)}-gram in \\{k}-grams: section", line=i + 1)
            entries[gram] = (logp, bow)
            seen += 1
            i += 1
        if seen != declared[k]:
            raise ParseError(
                f"count mismatch for {k}-grams: declared {declared[k]}, found {seen}",
                line=i + 1,
            )
    while i < len(lines) and not lines[i].strip():
        i += 1
    if i >= len(lines) or lines[i].strip() != "\\end\\":
        raise ParseError("truncated file: missing \\end\\", line=i + 1)

    model = KneserNeyLM(
        order=order, normalize=bool(int(meta.get("normalize", "0")))
    )
    model.entries_ = entries
    model.vocab_ = {g[0] for g in entries if len(g) == 1} | {BOS, EOS, UNK}
    model.discounts_ = [
        float(d) for d in meta.get("discounts", "").split(",") if d
    ] or None
    model.n_documents_ = int(meta.get("documents", "0"))
    model.n_tokens_ = int(meta.get("tokens", "0"))
    return model


def loads(text):
    return load(io.StringIO(text))
