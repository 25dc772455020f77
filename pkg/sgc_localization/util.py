import contextlib
import logging
import math
from pathlib import Path
from typing import IO, Iterator

PI_SIGNS = {"": 1.0, "+": 1.0, "-": -1.0}


def format_sig(value: float, digits: int = 9) -> str:
    """Format a real number with a fixed count of significant digits, locale independent.

    :param value: Number to format.
    :param digits: Significant digits.
    :return: Text such as ``-0.0123456789`` or ``1.5e-12``.
    """
    if value == 0.0:
        return "0"  # Avoids "-0" for negative zero.
    return f"{value:.{digits}g}"


def is_odd(n: int) -> bool:
    return n % 2 == 1


def parse_angle(text: str) -> float:
    """Parse an angle literal in radians, allowing multiples and fractions of pi.

    Accepted forms: ``1.2``, ``pi``, ``-pi``, ``0.5pi``, ``pi/1.7``, ``-pi/2``, ``2pi/3``.

    :param text: Literal to parse.
    :return: Angle in radians.
    :raises ValueError: The literal is not a number or a pi expression.
    """
    text = text.strip().lower()
    if "pi" not in text:
        return float(text)
    head, _, tail = text.partition("pi")
    head = head.strip()
    factor = PI_SIGNS[head] if head in PI_SIGNS else float(head)
    if tail:
        if not tail.startswith("/"):
            raise ValueError(f"Unexpected text after 'pi' in '{text}'.")
        divisor = float(tail[1:])
        if divisor == 0.0:
            raise ValueError(f"Division by zero in '{text}'.")
        factor /= divisor
    value = factor * math.pi
    if not math.isfinite(value):
        raise ValueError(f"Angle '{text}' is not finite.")
    return value


@contextlib.contextmanager
def output_sink(path: Path, binary: bool = False) -> Iterator[IO]:
    """Open an output file for writing, creating parent folders as needed.

    :param path: Destination file.
    :param binary: Open in binary mode.
    """
    path.parent.mkdir(parents=True, exist_ok=True)
    mode = "wb" if binary else "w"
    kwargs = {} if binary else {"encoding": "utf-8", "newline": ""}
    with open(path, mode, **kwargs) as sink:
        yield sink
    logging.info(f"Wrote {path}")
