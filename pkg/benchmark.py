import json
import logging
import statistics
import time

from tqdm import tqdm

from algebra.errors import TurancertError
from config.settings import Settings
from main import exit_code_for
from services.certify_service import PAPER, CertificationService, criterion_higher_turan
from services.inequality_service import HIGHER_TURAN, LAGUERRE2
from services.sequence_service import RATIO, ROOT
from services.spec_service import load_spec_file, resolve_spec_path

# Configure logging
logging.basicConfig(level=logging.INFO, format='%(asctime)s - %(levelname)s - %(message)s')

# (spec, target, property, start, mode)
CERTIFICATION_JOBS = [
    ("baxter", ROOT, HIGHER_TURAN, 2, PAPER),
    ("baxter", RATIO, HIGHER_TURAN, 2, PAPER),
    ("h", ROOT, LAGUERRE2, 1, PAPER),
    ("h", RATIO, LAGUERRE2, 2, PAPER),
]

TABLE_ROWS = ["motzkin", "cohen", "schroeder", "fine", "polyhex", "walks", "t_n", "domb"]


class CertificationBenchmark:
    def __init__(self, repeats=1, report_file="benchmark_report.json"):
        """Initialize the benchmark."""
        self.service = CertificationService()
        self.repeats = repeats
        self.report_file = report_file
        self.results = {"certifications": [], "criteria": []}

    def benchmark_certifications(self):
        """Time every full certification run."""
        logging.info(f"Benchmarking {len(CERTIFICATION_JOBS)} certification jobs, {self.repeats} repeat(s)...")
        for name, target, prop, start, mode in tqdm(CERTIFICATION_JOBS):
            spec = load_spec_file(resolve_spec_path(name))
            timings = []
            entry = {"spec": name, "target": target, "property": prop, "start": start}
            for _ in range(self.repeats):
                begin = time.perf_counter()
                try:
                    cert = self.service.certify(spec, target, prop, start, mode)
                except TurancertError as e:
                    logging.error(f"{name}/{target}/{prop} failed: {e}")
                    entry["error"] = str(e)
                    entry["exit_code"] = exit_code_for(e)
                    break
                timings.append(time.perf_counter() - begin)
                entry["overall_from"] = cert.overall_from
                entry["criterion_threshold"] = cert.stages.criterion.threshold
                entry["window"] = [cert.initial_window.from_, cert.initial_window.to]
            if timings:
                entry["seconds"] = {
                    "avg": statistics.mean(timings),
                    "min": min(timings),
                    "max": max(timings),
                }
                logging.info(f"{name}/{target}/{prop}: {entry['seconds']['avg']:.2f} s")
            self.results["certifications"].append(entry)

    def benchmark_table_criteria(self):
        """Criterion thresholds for the sequences that ship only u-bounds."""
        logging.info("Computing higher order Turán criteria for the u-bound table...")
        for name in tqdm(TABLE_ROWS):
            spec = load_spec_file(resolve_spec_path(name))
            row = {"spec": name}
            for target in (ROOT, RATIO):
                begin = time.perf_counter()
                stage = criterion_higher_turan(spec.bounds.fu, spec.bounds.gu, target)
                row[target] = {
                    "thresholds": [c.threshold for c in stage.compositions],
                    "seconds": time.perf_counter() - begin,
                }
            self.results["criteria"].append(row)

    def generate_report(self):
        report = {
            "precision_cap": Settings.PRECISION_CAP,
            "start_precision": Settings.START_PRECISION,
            "certifications": self.results["certifications"],
            "criteria": self.results["criteria"],
        }
        with open(self.report_file, "w") as f:
            json.dump(report, f, indent=2)
        logging.info(f"Report written to {self.report_file}")
        return report

    def run(self):
        self.benchmark_certifications()
        self.benchmark_table_criteria()
        return self.generate_report()


if __name__ == "__main__":
    CertificationBenchmark().run()
