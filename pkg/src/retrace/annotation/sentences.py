"""Rule-based sentence splitting for citation-context extraction.

Splits on [.!?] runs followed by whitespace and a sentence opener,
skipping common scholarly abbreviations, decimal numbers, and
terminators inside parentheses/brackets or quotes.
"""

from __future__ import annotations

ABBREVIATIONS = frozenset({
    "al", "cf", "ca", "dr", "ed", "eds", "e.g", "etc", "fig", "figs",
    "i.e", "jr", "mr", "mrs", "ms", "no", "p", "pp", "prof", "sec",
    "st", "vol", "vols", "vs",
})

_OPENERS = set("\"'(“‘[")
_CLOSERS = {")": "(", "]": "[", "}": "{"}


def _last_token(text: str) -> str:
    token = []
    for ch in reversed(text):
        if ch.isalnum() or ch == ".":
            token.append(ch)
        else:
            break
    return "".join(reversed(token)).lower()


def split_sentences(text: str) -> list[str]:
    """Split a paragraph into sentences (whitespace-trimmed)."""
    sentences: list[str] = []
    buf: list[str] = []
    depth = 0
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        buf.append(ch)
        if ch in "([{":
            depth += 1
        elif ch in ")]}":
            depth = max(0, depth - 1)
        elif ch in ".!?" and depth == 0:
            # absorb a run of terminators plus closing quotes
            j = i + 1
            while j < n and text[j] in ".!?\"'”’":
                buf.append(text[j])
                j += 1
            # sentence ends only before whitespace + plausible opener
            k = j
            while k < n and text[k] in " \t":
                k += 1
            next_ch = text[k] if k < n else ""
            before = "".join(buf[:-1]) if j == i + 1 else "".join(buf)
            token = _last_token("".join(buf).rstrip(".!?\"'”’"))
            is_abbrev = ch == "." and token in ABBREVIATIONS
            is_decimal = (
                ch == "."
                and i + 1 < n
                and text[i + 1].isdigit()
                and i > 0
                and text[i - 1].isdigit()
            )
            is_boundary = (
                j >= n
                or (text[j] in "\n\r")
                or (next_ch and (next_ch.isupper() or next_ch.isdigit() or next_ch in _OPENERS))
            )
            if not is_abbrev and not is_decimal and is_boundary:
                sentence = "".join(buf).strip()
                if sentence:
                    sentences.append(sentence)
                buf = []
            i = j - 1
        elif ch == "\n":
            # paragraph-internal newlines are soft; blank lines hard-split
            if i + 1 < n and text[i + 1] == "\n":
                sentence = "".join(buf).strip()
                if sentence:
                    sentences.append(sentence)
                buf = []
        i += 1
    tail = "".join(buf).strip()
    if tail:
        sentences.append(tail)
    return sentences
