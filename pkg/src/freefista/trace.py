"""Convergence-trace records and their CSV serialization."""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

CSV_HEADER = "algo,restart,global_iter,backtracks,tau,L_est,kappa_est,n_j,F_value,g_norm,time_s"


@dataclass
class TraceRecord:
    """One accepted step of a solver run.

    ``global_iter`` counts accepted forward-backward steps only; the
    rejected passes of the step-size search are reported separately in
    ``backtracks``.  ``kappa_est`` and ``g_norm`` are NaN where a solver
    does not produce them.
    """

    algo: str
    restart: int
    global_iter: int
    backtracks: int
    tau: float
    L_est: float
    kappa_est: float
    n_j: int
    F_value: float
    g_norm: float
    time_s: float

    def to_csv_row(self) -> str:
        return ",".join(
            (
                self.algo,
                str(self.restart),
                str(self.global_iter),
                str(self.backtracks),
                _fmt(self.tau),
                _fmt(self.L_est),
                _fmt(self.kappa_est),
                str(self.n_j),
                _fmt(self.F_value),
                _fmt(self.g_norm),
                _fmt(self.time_s),
            )
        )


def _fmt(v: float) -> str:
    if math.isnan(v):
        return "nan"
    return format(v, ".17g")


def write_trace_csv(path: str | Path, records: Iterable[TraceRecord]) -> None:
    with open(path, "w") as fh:
        fh.write(CSV_HEADER + "\n")
        for rec in records:
            fh.write(rec.to_csv_row() + "\n")


def read_trace_csv(path: str | Path) -> list[TraceRecord]:
    with open(path) as fh:
        header = fh.readline().rstrip("\n")
        if header != CSV_HEADER:
            raise ValueError(f"unexpected trace header: {header!r}")
        records = []
        for lineno, line in enumerate(fh, start=2):
            line = line.strip()
            if not line:
                continue
            parts = line.split(",")
            if len(parts) != 11:
                raise ValueError(f"line {lineno}: expected 11 fields, got {len(parts)}")
            records.append(
                TraceRecord(
                    algo=parts[0],
                    restart=int(parts[1]),
                    global_iter=int(parts[2]),
                    backtracks=int(parts[3]),
                    tau=float(parts[4]),
                    L_est=float(parts[5]),
                    kappa_est=float(parts[6]),
                    n_j=int(parts[7]),
                    F_value=float(parts[8]),
                    g_norm=float(parts[9]),
                    time_s=float(parts[10]),
                )
            )
    return records
