# 說明：本模組負責輸出與讀回實驗檔案：節點與權重 CSV、執行報告 JSON、掃描結果 CSV，以及節點散佈圖與掃描折線圖 SVG。
from __future__ import annotations

import csv
import io
import json
import os
import statistics
import tempfile
from collections import defaultdict
from pathlib import Path
from typing import Any, Dict, Iterable, List, Mapping, Sequence, Tuple

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
from numpy.typing import NDArray  # noqa: E402
from pydantic import BaseModel  # noqa: E402

from .domain import NodeSet  # noqa: E402
from .errors import InvalidArgumentError  # noqa: E402

FLOAT_FORMAT = ".17g"

# 固定 SVG 內部 id 與省略日期，使相同資料輸出相同位元組
_SVG_RC = {"svg.hashsalt": "kq-pwgd", "svg.fonttype": "none"}
_SVG_METADATA = {"Date": None, "Creator": "kq-pwgd"}


def _format_float(value: float) -> str:
    return format(float(value), FLOAT_FORMAT)


def atomic_write_text(path: Path, text: str) -> None:
    """先寫入同目錄的暫存檔再以 os.replace 取代，避免留下寫到一半的檔案。"""

    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
        os.replace(tmp_name, path)
    except BaseException:
        Path(tmp_name).unlink(missing_ok=True)
        raise


def _csv_text(header: Sequence[str], rows: Iterable[Sequence[str]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


def write_points_csv(path: Path, nodes: NodeSet) -> None:
    header = [f"x{k + 1}" for k in range(nodes.dim)]
    rows = ([_format_float(v) for v in point] for point in nodes.points)
    atomic_write_text(path, _csv_text(header, rows))


def read_points_csv(path: Path) -> NodeSet:
    with path.open(encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle)
        header = next(reader, None)
        if not header or any(name != f"x{k + 1}" for k, name in enumerate(header)):
            raise InvalidArgumentError(f"{path} 的標頭需為 x1,...,xd，收到 {header}")
        rows = [[float(value) for value in row] for row in reader if row]
    return NodeSet(np.array(rows, dtype=np.float64).reshape(-1, len(header)))


def write_weights_csv(path: Path, weights: NDArray[np.float64]) -> None:
    atomic_write_text(path, _csv_text(["w"], ([_format_float(w)] for w in weights)))


def read_weights_csv(path: Path) -> NDArray[np.float64]:
    with path.open(encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle)
        next(reader, None)
        return np.array([float(row[0]) for row in reader if row], dtype=np.float64)


def write_report_json(path: Path, report: BaseModel) -> None:
    # json 以 repr 輸出浮點數，即最短可還原表示
    payload = report.model_dump(mode="json")
    atomic_write_text(path, json.dumps(payload, indent=2, ensure_ascii=False) + "\n")


def read_report_json(path: Path) -> Dict[str, Any]:
    return json.loads(path.read_text(encoding="utf-8"))


def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return _format_float(value)
    return str(value)


def write_sweep_csv(path: Path, rows: Sequence[BaseModel]) -> None:
    if not rows:
        raise InvalidArgumentError("掃描結果為空，沒有可寫入的列")
    header = list(rows[0].model_dump().keys())
    body = ([_cell(row.model_dump()[name]) for name in header] for row in rows)
    atomic_write_text(path, _csv_text(header, body))


def _save_svg(fig: "plt.Figure", path: Path) -> None:
    buffer = io.StringIO()
    fig.savefig(buffer, format="svg", metadata=_SVG_METADATA)
    plt.close(fig)
    atomic_write_text(path, buffer.getvalue())


def _projections(dim: int) -> List[Tuple[int, int]]:
    if dim == 2:
        return [(0, 1)]
    if dim == 3:
        return [(0, 1), (0, 2), (1, 2)]
    raise InvalidArgumentError(f"散佈圖只支援 d=2 或 d=3，收到 {dim}")


def plot_points_svg(path: Path, nodes: NodeSet, title: str) -> None:
    """d=2 畫單一散佈圖；d=3 畫三個座標平面上的正交投影。"""

    pairs = _projections(nodes.dim)
    with plt.rc_context(_SVG_RC):
        fig, axes = plt.subplots(1, len(pairs), figsize=(4.0 * len(pairs), 4.2), squeeze=False)
        for ax, (p, q) in zip(axes[0], pairs):
            ax.scatter(nodes.points[:, p], nodes.points[:, q], s=12, color="tab:blue")
            ax.set_xlim(0.0, 1.0)
            ax.set_ylim(0.0, 1.0)
            ax.set_aspect("equal")
            ax.set_xlabel(f"x{p + 1}")
            ax.set_ylabel(f"x{q + 1}")
        fig.suptitle(title)
        fig.tight_layout()
        _save_svg(fig, path)


def sweep_medians(rows: Sequence[Mapping[str, Any]]) -> Dict[str, List[Tuple[int, float]]]:
    """依方法分組，回傳每個 N 在各 seed 上平方最佳權重誤差的中位數。"""

    grouped: Dict[str, Dict[int, List[float]]] = defaultdict(lambda: defaultdict(list))
    for row in rows:
        grouped[row["method"]][int(row["n"])].append(float(row["squared_wce_optimal"]))
    return {
        method: [(n, statistics.median(values)) for n, values in sorted(by_n.items())]
        for method, by_n in sorted(grouped.items())
    }


def plot_sweep_svg(path: Path, rows: Sequence[BaseModel]) -> None:
    medians = sweep_medians([row.model_dump() for row in rows])
    with plt.rc_context(_SVG_RC):
        fig, ax = plt.subplots(figsize=(6.0, 4.5))
        for method, series in medians.items():
            ns = [n for n, _ in series]
            # 對數軸無法顯示 0，以機器精度為下限
            values = [max(v, np.finfo(float).tiny) for _, v in series]
            ax.plot(ns, values, marker="o", label=method)
        ax.set_yscale("log")
        ax.set_xlabel("N")
        ax.set_ylabel("squared worst-case error (optimal weights, median)")
        ax.legend()
        fig.tight_layout()
        _save_svg(fig, path)
