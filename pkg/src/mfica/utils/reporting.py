"""Console banners for simulation studies."""

from typing import Sequence

import pandas as pd


class StudyLogger:
    """Utility class for study progress output."""

    @staticmethod
    def log_study_start(cells: int, replications: int, workers: int, methods: Sequence[str]):
        """Log the size of a study before it runs."""
        print(f"\n{'=' * 60}")
        print("🚀 **SIMULATION STUDY**")
        print(f"{'=' * 60}")
        print(f"📊 Grid cells: {cells}")
        print(f"🔁 Replications per cell: {replications}")
        print(f"🛠️  Methods: {', '.join(m.upper() for m in methods)}")
        print(f"⚙️  Workers: {workers}")
        print(f"{'=' * 60}")

    @staticmethod
    def log_cell_done(setting: str, lambda_mix: float, n: int, done: int, total: int):
        print(f"  ✅ [{done}/{total}] {setting} lambda={lambda_mix:g} n={n}")

    @staticmethod
    def log_failures(failures: pd.DataFrame, limit: int = 10):
        """Log failed replications, at most ``limit`` of them."""
        if failures.empty:
            return
        print(f"\n⚠️  {len(failures)} replication(s) failed")
        for _, row in failures.head(limit).iterrows():
            print(
                f"  ❌ {row['setting']} lambda={row['lambda']:g} n={row['n']} "
                f"{row['method']} rep={row['replication']}: {row['reason']}"
            )
        if len(failures) > limit:
            print(f"  ... and {len(failures) - limit} more")

    @staticmethod
    def log_summary(summary: pd.DataFrame):
        """Log mean MDI per grid cell and method."""
        print(f"\n{'=' * 60}")
        print("🎯 **MEAN MINIMUM DISTANCE INDEX**")
        print(f"{'=' * 60}")
        if summary.empty:
            print("  (no results)")
        else:
            table = summary.pivot_table(
                index=["setting", "lambda", "n"], columns="method", values="mean_mdi"
            )
            print(table.to_string(float_format=lambda v: f"{v:.4f}"))
        print(f"{'=' * 60}")
