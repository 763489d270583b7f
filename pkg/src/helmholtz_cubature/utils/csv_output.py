"""
CSV emission: '#' comment lines with provenance, then the table.
"""

import io
import os
import sys

import pandas as pd

from helmholtz_cubature.utils.logger import logger

FLOAT_FORMAT = "%.15e"


def render_csv(df: pd.DataFrame, header: dict) -> str:
    """Comment header plus the table, '.' decimals, 16 significant digits."""
    buffer = io.StringIO()
    for key, value in header.items():
        buffer.write(f"# {key}: {value}\n")
    df.to_csv(buffer, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    return buffer.getvalue()


def write_csv(df: pd.DataFrame, header: dict, out=None):
    """Write to the path out, or to stdout when out is None or '-'."""
    text = render_csv(df, header)
    if out in (None, "-"):
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    folder = os.path.dirname(os.path.abspath(out))
    os.makedirs(folder, exist_ok=True)
    with open(out, "w", newline="") as handle:
        handle.write(text)
    logger.info(f"Wrote {len(df)} rows to {out}")
