"""FCIDUMP text format: plain-text exchange of MO integrals.

Conventions: chemists' notation (ij|kl), 1-based indices in the file and
0-based in memory; the ``i=j=k=l=0`` line carries the nuclear repulsion.
Values are written with 17 significant digits so write -> parse round-trips
float64 data exactly.
"""

import re

import numpy as np

from vqsm.chem import MOIntegrals
from vqsm.errors import FcidumpParseError

_HEADER_RE = re.compile(r"&FCIDUMP", re.IGNORECASE)


def write_fcidump(mo: MOIntegrals, ms2: int = 0) -> str:
    """Serialize MO integrals to FCIDUMP text (unique elements only)."""
    n = mo.n_orb
    lines = [
        f"&FCIDUMP NORB={n},NELEC={mo.n_elec},MS2={ms2},",
        f" ORBSYM={','.join(['1'] * n)},",
        " ISYM=1,",
        "&END",
    ]

    def fmt(value, i, j, k, l):
        return f"{value:24.17g} {i:4d} {j:4d} {k:4d} {l:4d}"

    for i in range(n):
        for j in range(i + 1):
            for k in range(i + 1):
                lmax = j if k == i else k
                for l in range(lmax + 1):
                    lines.append(fmt(mo.g[i, j, k, l], i + 1, j + 1, k + 1, l + 1))
    for i in range(n):
        for j in range(i + 1):
            lines.append(fmt(mo.h[i, j], i + 1, j + 1, 0, 0))
    lines.append(fmt(mo.e_nuc, 0, 0, 0, 0))
    return "\n".join(lines) + "\n"


def parse_fcidump(text: str) -> MOIntegrals:
    """Parse FCIDUMP text into MOIntegrals.

    Raises FcidumpParseError (with the 1-based line number) on malformed
    headers, out-of-range indices, or conflicting duplicate entries.
    """
    lines = text.splitlines()
    if not lines or not _HEADER_RE.search(lines[0]):
        raise FcidumpParseError("missing &FCIDUMP header", line_number=1)

    header_text = []
    body_start = None
    for ln, line in enumerate(lines, start=1):
        header_text.append(line)
        if "&END" in line.upper() or line.strip() == "/" or line.strip().endswith("/"):
            body_start = ln
            break
    if body_start is None:
        # Single-line header without explicit terminator: header is line 1 only.
        header_text = [lines[0]]
        body_start = 1
    header = " ".join(header_text)

    def header_int(key):
        m = re.search(rf"{key}\s*=\s*(-?\d+)", header, re.IGNORECASE)
        if m is None:
            raise FcidumpParseError(f"header missing {key}", line_number=1)
        return int(m.group(1))

    n_orb = header_int("NORB")
    n_elec = header_int("NELEC")
    header_int("MS2")  # validated for presence; sector choice is the caller's
    if n_orb <= 0:
        raise FcidumpParseError(f"NORB={n_orb} must be positive", line_number=1)

    h = np.full((n_orb, n_orb), np.nan)
    g = np.full((n_orb, n_orb, n_orb, n_orb), np.nan)
    e_nuc = None

    def assign(arr, idx, value, ln):
        current = arr[idx]
        if not np.isnan(current) and abs(current - value) > 1e-12:
            raise FcidumpParseError(
                f"conflicting duplicate entry for indices {idx}", line_number=ln
            )
        arr[idx] = value

    for ln in range(body_start + 1, len(lines) + 1):
        line = lines[ln - 1].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 5:
            raise FcidumpParseError(f"expected 'value i j k l', got {line!r}", line_number=ln)
        try:
            value = float(parts[0])
            i, j, k, l = (int(p) for p in parts[1:])
        except ValueError as exc:
            raise FcidumpParseError(str(exc), line_number=ln) from exc
        for idx in (i, j, k, l):
            if idx < 0 or idx > n_orb:
                raise FcidumpParseError(f"index {idx} out of range 0..{n_orb}", line_number=ln)
        if i == j == k == l == 0:
            if e_nuc is not None and abs(e_nuc - value) > 1e-12:
                raise FcidumpParseError("conflicting nuclear repulsion entries", line_number=ln)
            e_nuc = value
        elif k == 0 and l == 0:
            if i == 0 or j == 0:
                raise FcidumpParseError("one-electron entry with zero index", line_number=ln)
            a, b = i - 1, j - 1
            assign(h, (a, b), value, ln)
            assign(h, (b, a), value, ln)
        else:
            if 0 in (i, j, k, l):
                raise FcidumpParseError("two-electron entry with zero index", line_number=ln)
            a, b, c, d = i - 1, j - 1, k - 1, l - 1
            for idx in (
                (a, b, c, d), (b, a, c, d), (a, b, d, c), (b, a, d, c),
                (c, d, a, b), (d, c, a, b), (c, d, b, a), (d, c, b, a),
            ):
                assign(g, idx, value, ln)

    h = np.nan_to_num(h, nan=0.0)
    g = np.nan_to_num(g, nan=0.0)
    if e_nuc is None:
        e_nuc = 0.0
    return MOIntegrals(h=h, g=g, e_nuc=e_nuc, n_elec=n_elec)
