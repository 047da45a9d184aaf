#!/usr/bin/env python3
"""
FlatLab Log Analysis Tool
Summarizes the JSONL run logs written by `flatlab <command> --log-dir DIR`.
"""

import json
import glob
import os
from collections import Counter
import argparse


def _load_jsonl(pattern):
    entries = []
    for file_path in glob.glob(pattern):
        with open(file_path, 'r', encoding='utf-8') as f:
            for line in f:
                if line.strip():
                    entries.append(json.loads(line))
    return sorted(entries, key=lambda x: x['timestamp']['unix'])


def load_run_info(run_dir):
    """Load the most recent run info of a command directory."""
    files = sorted(glob.glob(os.path.join(run_dir, 'run_info_*.json')))
    if not files:
        return None

    with open(files[-1], 'r') as f:
        return json.load(f)


def load_computations(run_dir):
    return _load_jsonl(os.path.join(run_dir, 'computations_*.jsonl'))


def load_tech_logs(run_dir):
    return _load_jsonl(os.path.join(run_dir, 'tech_log_*.jsonl'))


def summarize_run(run_dir):
    """Collect the numbers the report prints, as a dict."""
    run_info = load_run_info(run_dir)
    computations = load_computations(run_dir)
    tech_logs = load_tech_logs(run_dir)
    return {
        "run_info": run_info,
        "computation_types": dict(Counter(c['computation_type'] for c in computations)),
        "certificate_entries": [c['details'] for c in computations if c['computation_type'] == 'CERTIFICATE_ENTRY'],
        "errors": [c['details'] for c in computations if c['computation_type'] == 'ERROR'],
        "warnings": [log['message'] for log in tech_logs if log['level'] == 'WARNING'],
        "tech_levels": dict(Counter(log['level'] for log in tech_logs)),
    }


def analyze_run_overview(run_dir):
    """Provide run overview."""
    run_info = load_run_info(run_dir)
    if not run_info:
        print(f"No run info found in {run_dir}")
        return

    print(f"\n=== RUN OVERVIEW: {run_info['command']} ===")
    print(f"Start Time: {run_info['run_start_time']['local']}")
    if 'run_end_time' in run_info:
        print(f"End Time: {run_info['run_end_time']['local']}")
        print(f"Duration: {run_info['run_duration_seconds']:.2f} seconds")
        print(f"Exit Code: {run_info['exit_code']}")
    else:
        print("Run was not finalized (interrupted?)")

    print(f"\nArguments:")
    for key, value in sorted(run_info.get('arguments', {}).items()):
        print(f"  {key}: {value}")


def analyze_computations(run_dir):
    """Analyze computation events."""
    summary = summarize_run(run_dir)
    if not summary['computation_types']:
        print(f"No computations found in {run_dir}")
        return

    print(f"\n=== COMPUTATIONS ===")
    print(f"Computation Type Frequency:")
    for computation, count in Counter(summary['computation_types']).most_common():
        print(f"  {computation}: {count}")

    if summary['certificate_entries']:
        print(f"\nCertificate Entries ({len(summary['certificate_entries'])}):")
        for entry in summary['certificate_entries']:
            print(f"  {entry['spec']}: {entry['rows']}x{entry['cols']} rank {entry['rank']} "
                  f"e {entry['e']} bound {entry['bound']}")

    for error in summary['errors']:
        print(f"\n❌ {error['type']}: {error['message']}")


def analyze_tech_logs(run_dir):
    """Analyze technical logs."""
    tech_logs = load_tech_logs(run_dir)
    if not tech_logs:
        print(f"No tech logs found in {run_dir}")
        return

    print(f"\n=== TECHNICAL LOGS ===")
    print(f"Total Tech Log Entries: {len(tech_logs)}")

    levels = Counter(log['level'] for log in tech_logs)
    print(f"\nLog Level Distribution:")
    for level, count in levels.most_common():
        print(f"  {level}: {count}")

    errors_warnings = [log for log in tech_logs if log['level'] in ['ERROR', 'WARNING']]
    if errors_warnings:
        print(f"\nErrors and Warnings ({len(errors_warnings)}):")
        for log in errors_warnings:
            print(f"  {log['timestamp']['local']} [{log['level']}]: {log['message']}")


def list_commands(log_dir):
    """List command directories below a log directory."""
    if not os.path.exists(log_dir):
        print(f"No log directory {log_dir} found")
        return []

    return sorted(d for d in os.listdir(log_dir) if os.path.isdir(os.path.join(log_dir, d)))


def main():
    parser = argparse.ArgumentParser(description='Analyze FlatLab run logs')
    parser.add_argument('command', nargs='?', help='Command whose runs to analyze (e.g. bound)')
    parser.add_argument('--log-dir', default='logs', help='Directory given to --log-dir (default: logs)')
    parser.add_argument('--overview', action='store_true', help='Show run overview only')
    parser.add_argument('--computations', action='store_true', help='Show computation analysis only')
    parser.add_argument('--tech', action='store_true', help='Show technical logs analysis only')

    args = parser.parse_args()

    if not args.command:
        commands = list_commands(args.log_dir)
        if commands:
            print("Logged commands:")
            for c in commands:
                print(f"  {c}")
            print("\nUsage: python analyze_logs.py <command> [--log-dir DIR]")
        else:
            print("No runs found. Run flatlab with --log-dir to generate logs.")
        return

    run_dir = os.path.join(args.log_dir, args.command)
    if not any([args.overview, args.computations, args.tech]):
        analyze_run_overview(run_dir)
        analyze_computations(run_dir)
        analyze_tech_logs(run_dir)
    else:
        if args.overview:
            analyze_run_overview(run_dir)
        if args.computations:
            analyze_computations(run_dir)
        if args.tech:
            analyze_tech_logs(run_dir)


if __name__ == '__main__':
    main()
