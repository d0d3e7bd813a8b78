"""Deterministic JSON and CSV serialization for CLI payloads.

Floats are rendered with %.17g (round-trip exact for IEEE doubles) and always
carry a decimal point or exponent so they read back as floats.  Complex
numbers are [re, im] pairs.  Dict keys keep insertion order, so identical
payloads serialize to identical bytes.
"""

from __future__ import annotations

import csv
import json

import numpy as np


def format_float(value):
    """Render a finite float with 17 significant digits, round-trip exact."""
    value = float(value)
    if not np.isfinite(value):
        raise ValueError(f"cannot serialize non-finite value {value!r}")
    text = "%.17g" % value
    if "." not in text and "e" not in text and "E" not in text:
        text += ".0"
    return text


def complex_pair(value):
    """Complex number as a [re, im] list of floats."""
    value = complex(value)
    return [value.real, value.imag]


def pairs_to_complex(pairs, name="values"):
    """Parse a list of [re, im] pairs (bare reals allowed) to complex128."""
    if not isinstance(pairs, list) or not pairs:
        raise ValueError(f"{name} must be a non-empty list")
    out = np.empty(len(pairs), dtype=np.complex128)
    for i, item in enumerate(pairs):
        if isinstance(item, (int, float)) and not isinstance(item, bool):
            out[i] = float(item)
        elif (
            isinstance(item, list)
            and len(item) == 2
            and all(isinstance(part, (int, float)) and not isinstance(part, bool) for part in item)
        ):
            out[i] = complex(float(item[0]), float(item[1]))
        else:
            raise ValueError(
                f"{name}[{i}] must be a number or a [re, im] pair, got {item!r}"
            )
    if not np.isfinite(out).all():
        raise ValueError(f"{name} must contain only finite values")
    return out


def _encode(value):
    if value is None or isinstance(value, (bool, str)):
        return json.dumps(value)
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format_float(value)
    if isinstance(value, (complex, np.complexfloating)):
        return _encode(complex_pair(value))
    if isinstance(value, np.ndarray):
        return _encode(list(value))
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_encode(item) for item in value) + "]"
    if isinstance(value, dict):
        parts = (
            f"{json.dumps(str(key))}: {_encode(item)}" for key, item in value.items()
        )
        return "{" + ", ".join(parts) + "}"
    raise TypeError(f"cannot serialize {type(value).__name__}")


def dumps(document):
    """Serialize to a deterministic JSON string (no trailing newline)."""
    return _encode(document)


def load_document(text, name="input"):
    """Parse a JSON document, mapping syntax errors to ValueError."""
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"{name} is not valid JSON: {exc}") from None


def write_nodes_csv(stream, nodes):
    """Write nodes as CSV with header k,re,im,abs (k is 1-based)."""
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(["k", "re", "im", "abs"])
    for k, node in enumerate(np.asarray(nodes, dtype=np.complex128), start=1):
        writer.writerow(
            [k, format_float(node.real), format_float(node.imag), format_float(abs(node))]
        )
