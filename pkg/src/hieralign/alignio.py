"""Pharaoh-format alignment files: space-separated `j-i` links per line."""

from __future__ import annotations


class AlignmentFormatError(Exception):
    """Malformed link token in an alignment file."""


def parse_alignment_line(line, lineno=None):
    """Parse one Pharaoh line into a set of (source, target) links."""
    links = set()
    for token in line.split():
        a, sep, b = token.partition("-")
        if not sep or not a.isdigit() or not b.isdigit():
            where = f"line {lineno}: " if lineno is not None else ""
            raise AlignmentFormatError(f"{where}bad link token {token!r}")
        links.add((int(a), int(b)))
    return links


def format_alignment(links):
    """Render links sorted by source then target index; empty set -> empty line."""
    return " ".join(f"{j}-{i}" for j, i in sorted(links))


def read_alignment_file(path):
    out = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            out.append(parse_alignment_line(line, lineno))
    return out


def write_alignment_file(path, alignments):
    with open(path, "w", encoding="utf-8") as fh:
        for links in alignments:
            fh.write(format_alignment(links) + "\n")
