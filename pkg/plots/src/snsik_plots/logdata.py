"""Reader for the simulator's CSV log format.

The header layout is a contract: t, q_1..q_n, qd_1..qd_n, ee/err per task
axis, s_star, status, sat_tags, then one position and one velocity column per
control-point axis. Anything else is treated as a log from an incompatible
producer version and rejected up front, before any figure is touched.
"""

from dataclasses import dataclass

import numpy as np


class LogFormatError(ValueError):
    """CSV header or rows do not match the expected log contract."""


class EmptyLogError(ValueError):
    """CSV contains a header but no tick rows."""


@dataclass(frozen=True)
class LogData:
    """One parsed log: time-major numeric blocks plus per-tick status strings.

    cp_groups lists (ordinal, axes) per control point in declaration order;
    cp_pos/cp_vel map "cp{ordinal}_{axis}" style column keys to 1-D arrays.
    """

    t: np.ndarray
    q: np.ndarray
    qd: np.ndarray
    axes: tuple
    ee: np.ndarray
    err: np.ndarray
    s_star: np.ndarray
    status: tuple
    sat_tags: tuple
    cp_groups: tuple
    cp_pos: dict
    cp_vel: dict

    @property
    def joint_count(self):
        return self.q.shape[1]

    @property
    def ticks(self):
        return self.t.shape[0]


def _take_block(header, pos, prefix):
    names = []
    while pos < len(header) and header[pos].startswith(prefix):
        names.append(header[pos][len(prefix):])
        pos += 1
    return names, pos


def _parse_header(header):
    if not header or header[0] != "t":
        raise LogFormatError("first column must be 't'; incompatible log version?")
    pos = 1
    q_names, pos = _take_block(header, pos, "q_")
    qd_names, pos = _take_block(header, pos, "qd_")
    if not q_names or q_names != [str(j + 1) for j in range(len(q_names))]:
        raise LogFormatError("expected q_1..q_n columns after 't'")
    if qd_names != q_names:
        raise LogFormatError("qd_ columns must mirror the q_ columns")
    ee_axes, pos = _take_block(header, pos, "ee_")
    err_axes, pos = _take_block(header, pos, "err_")
    if not ee_axes or err_axes != ee_axes:
        raise LogFormatError("err_ columns must mirror the ee_ columns")
    if header[pos:pos + 3] != ["s_star", "status", "sat_tags"]:
        raise LogFormatError("expected s_star,status,sat_tags after the task block")
    pos += 3

    cp_names, pos = _take_block(header, pos, "cp_")
    cpd_names, pos = _take_block(header, pos, "cpd_")
    if cpd_names != cp_names:
        raise LogFormatError("cpd_ columns must mirror the cp_ columns")
    if pos != len(header):
        raise LogFormatError(f"unrecognized trailing column {header[pos]!r}")
    groups = []
    for name in cp_names:
        ordinal, _, axis = name.partition("_")
        if not ordinal.isdigit() or not axis:
            raise LogFormatError(f"malformed control-point column 'cp_{name}'")
        ordinal = int(ordinal)
        if groups and groups[-1][0] == ordinal:
            groups[-1] = (ordinal, groups[-1][1] + (axis,))
        else:
            groups.append((ordinal, (axis,)))
    if [g[0] for g in groups] != list(range(1, len(groups) + 1)):
        raise LogFormatError("control-point columns must be numbered 1..k in order")
    return len(q_names), tuple(ee_axes), tuple(groups)


def parse_log(text):
    """Parse CSV text into LogData; reject wrong headers and header-only files."""
    lines = text.splitlines()
    if not lines:
        raise LogFormatError("log file is empty, not even a header")
    header = lines[0].split(",")
    n, axes, groups = _parse_header(header)
    body = [line for line in lines[1:] if line]
    if not body:
        raise EmptyLogError("log has a header but no tick rows")

    status_col = 1 + 2 * n + 2 * len(axes) + 1
    status = []
    tags = []
    numeric = []
    for line in body:
        parts = line.split(",")
        if len(parts) != len(header):
            raise LogFormatError("row width does not match the header")
        status.append(parts[status_col])
        tags.append(parts[status_col + 1])
        del parts[status_col:status_col + 2]
        try:
            numeric.append([float(v) for v in parts])
        except ValueError as exc:
            raise LogFormatError(f"non-numeric value in a numeric column: {exc}") from None
    data = np.array(numeric)

    pos = 0

    def block(width):
        nonlocal pos
        out = data[:, pos:pos + width]
        pos += width
        return out

    t = block(1)[:, 0]
    q = block(n)
    qd = block(n)
    ee = block(len(axes))
    err = block(len(axes))
    s_star = block(1)[:, 0]
    cp_pos = {}
    cp_vel = {}
    for target in (cp_pos, cp_vel):
        for ordinal, cp_axes in groups:
            for axis in cp_axes:
                target[f"cp{ordinal}_{axis}"] = block(1)[:, 0]
    return LogData(
        t=t, q=q, qd=qd, axes=axes, ee=ee, err=err, s_star=s_star,
        status=tuple(status), sat_tags=tuple(tags),
        cp_groups=groups, cp_pos=cp_pos, cp_vel=cp_vel,
    )


def read_log_file(path):
    with open(path, "r", encoding="utf-8") as handle:
        return parse_log(handle.read())
