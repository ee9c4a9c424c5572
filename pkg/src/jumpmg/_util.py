"""Small shared helpers: atomic file output and CSV float formatting."""

import os
import tempfile


def fmt_float(x: float) -> str:
    """Shortest round-trip decimal form; byte-stable across runs."""
    return repr(float(x))


def fmt_cell(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return fmt_float(v)
    return str(v)


def atomic_write_text(path: str, text: str) -> None:
    """Write via a temp file and rename so no partial file survives a crash."""
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", suffix="~")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def write_csv(path: str, header: list[str], rows) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(fmt_cell(v) for v in row))
    atomic_write_text(path, "\n".join(lines) + "\n")
