#!/usr/bin/env python3

import os
import json
import time
import sys
import warnings
from contextlib import contextmanager
from datetime import datetime, timezone


def _timestamp_block(now=None):
    now = now or datetime.now()
    return {
        "local": now.strftime('%Y-%m-%d %H:%M:%S.%f')[:-3],
        "utc": datetime.now(timezone.utc).strftime('%Y-%m-%d %H:%M:%S.%f')[:-3],
        "unix": time.time()
    }


class LoggingManager:
    """Manages run logging for one FlatLab command.

    Until setup_logging_for_run() is called every log_* method is a no-op, so
    library code can log unconditionally.
    """

    def __init__(self, verbose=False, stream=None):
        self.verbose = verbose
        self.stream = stream
        self.command = None
        self.log_dir = None
        self.run_start_time = datetime.now()
        self.warning_count = 0

        # Log file paths
        self.run_info_file_path = None
        self.computation_log_file_path = None
        self.tech_log_file_path = None

    @property
    def _err(self):
        return self.stream or sys.stderr

    def setup_logging_for_run(self, command, base_dir, run_metadata=None):
        """Set up logging files for a command run: ``<base_dir>/<command>/``."""
        self.command = command
        timestamp = datetime.now().strftime("%Y%m%d_%H%M%S")

        try:
            self.log_dir = os.path.join(base_dir, command)
            os.makedirs(self.log_dir, exist_ok=True)
        except Exception as e:
            self._err.write(f"⚠️ Warning: Could not create log directory {base_dir}: {e}\n")
            self.log_dir = None
            return

        self.run_info_file_path = os.path.join(self.log_dir, f"run_info_{timestamp}.json")
        self.computation_log_file_path = os.path.join(self.log_dir, f"computations_{timestamp}.jsonl")
        self.tech_log_file_path = os.path.join(self.log_dir, f"tech_log_{timestamp}.jsonl")

        self.setup_tech_logging()
        self.setup_computation_logging()
        self.create_run_info_file(run_metadata or {})

    def create_run_info_file(self, run_metadata):
        """Create run information file with metadata."""
        try:
            from config import (APPLICATION_VERSION, DEFAULT_PAIRING, GRID_SIZE_CAP,
                                MODULAR_PRIME_BUDGET, POINT_RANK_CHECK_TRIALS, WITNESS_RANK_LIMIT)

            run_info = {
                "command": self.command,
                "run_start_time": _timestamp_block(self.run_start_time),
                "application_version": APPLICATION_VERSION,
                "arguments": run_metadata,
                "configuration": {
                    "default_pairing": DEFAULT_PAIRING,
                    "grid_size_cap": GRID_SIZE_CAP,
                    "modular_prime_budget": MODULAR_PRIME_BUDGET,
                    "point_rank_check_trials": POINT_RANK_CHECK_TRIALS,
                    "witness_rank_limit": WITNESS_RANK_LIMIT
                },
                "file_structure": {
                    "computations_log": os.path.basename(self.computation_log_file_path),
                    "tech_log": os.path.basename(self.tech_log_file_path),
                    "run_info": os.path.basename(self.run_info_file_path)
                }
            }

            with open(self.run_info_file_path, 'w') as f:
                json.dump(run_info, f, indent=2)

            self.tech_print(f"📋 Run info file created: {self.run_info_file_path}")
        except Exception as e:
            self._err.write(f"⚠️ Warning: Could not create run info file: {e}\n")
            self.run_info_file_path = None

    def setup_computation_logging(self):
        """Initialize the computation log (JSONL, one object per event)."""
        try:
            with open(self.computation_log_file_path, 'w'):
                pass
            self.tech_print(f"📊 Computation log file created: {self.computation_log_file_path}")
        except Exception as e:
            self._err.write(f"⚠️ Warning: Could not create computation log file: {e}\n")
            self.computation_log_file_path = None

    def setup_tech_logging(self):
        """Initialize the tech log (JSONL)."""
        try:
            with open(self.tech_log_file_path, 'w'):
                pass
        except Exception as e:
            self._err.write(f"⚠️ Warning: Could not create tech log file: {e}\n")
            self.tech_log_file_path = None

    def _append(self, path, entry):
        with open(path, 'a', encoding='utf-8') as f:
            f.write(json.dumps(entry, ensure_ascii=False, default=str) + '\n')
            f.flush()

    def log_computation(self, computation, details=None):
        """Log one computation event (matrix built, rank computed, span test, ...)."""
        if not self.computation_log_file_path:
            return

        try:
            now = datetime.now()
            entry = {
                "timestamp": _timestamp_block(now),
                "command": self.command,
                "computation_type": computation,
                "details": details or {},
                "run_duration_seconds": (now - self.run_start_time).total_seconds()
            }
            self._append(self.computation_log_file_path, entry)
        except Exception as e:
            self._err.write(f"⚠️ Warning: Could not log computation: {e}\n")

    def log_certificate_entry(self, entry):
        """Helper to log one certificate row consistently."""
        self.log_computation("CERTIFICATE_ENTRY", {
            "spec": entry.spec.label,
            "rows": entry.rows,
            "cols": entry.cols,
            "rank": entry.rank,
            "e": entry.e,
            "bound": entry.bound,
            "witness": entry.witness is not None
        })

    def log_tech_message(self, message, level="INFO"):
        """Log technical messages to the tech log file."""
        if not self.tech_log_file_path:
            return

        try:
            now = datetime.now()
            tech_entry = {
                "timestamp": _timestamp_block(now),
                "command": self.command or 'unknown',
                "level": level,
                "message": message,
                "run_duration_seconds": (now - self.run_start_time).total_seconds()
            }
            self._append(self.tech_log_file_path, tech_entry)
        except Exception as e:
            try:
                self._err.write(f"⚠️ Warning: Could not write to tech log: {e}\n")
            except Exception:
                pass

    def tech_print(self, message, level="INFO"):
        """Print to stderr under --verbose and log to the tech log file."""
        if self.verbose:
            self._err.write(message + "\n")
            self._err.flush()
        self.log_tech_message(message, level)

    def log_error_event(self, error):
        """Log an error that ends the run."""
        self.log_tech_message(f"{type(error).__name__}: {error}", level="ERROR")
        self.log_computation("ERROR", {"type": type(error).__name__, "message": str(error)})

    @contextmanager
    def capture_warnings(self):
        """Collect warnings.warn notices raised by library code during a command.

        Each one is printed as a warning line on stderr and written to the tech log.
        """
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            try:
                yield caught
            finally:
                for notice in caught:
                    if not issubclass(notice.category, UserWarning):
                        continue
                    message = str(notice.message)
                    self.warning_count += 1
                    self._err.write(f"⚠️ Warning: {message}\n")
                    self.log_tech_message(message, level="WARNING")

    def finalize_run(self, exit_code):
        """Finalize the run by adding end time, exit code and statistics to run info."""
        if not self.run_info_file_path:
            return

        try:
            with open(self.run_info_file_path, 'r') as f:
                run_info = json.load(f)

            now = datetime.now()
            run_info["run_end_time"] = _timestamp_block(now)
            run_info["run_duration_seconds"] = (now - self.run_start_time).total_seconds()
            run_info["exit_code"] = exit_code
            run_info["warning_count"] = self.warning_count

            with open(self.run_info_file_path, 'w') as f:
                json.dump(run_info, f, indent=2)

            self.tech_print(f"📋 Run finalized: {run_info['run_duration_seconds']:.2f} seconds, exit code {exit_code}")
        except Exception as e:
            self._err.write(f"⚠️ Warning: Could not finalize run: {e}\n")
