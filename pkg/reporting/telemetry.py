"""
CSV telemetry of a traversal trace.
"""
import csv
import os

CSV_HEADER = (
    't_s', 's_mm', 'segment', 'mu_deg',
    'vA_mm_s', 'vB_mm_s', 'vC_mm_s', 'vR_mm_s',
    'dA_mm', 'dB_mm', 'dC_mm',
    'cA_mm', 'cB_mm', 'cC_mm',
    'tau1', 'tau2', 'tau3',
)


def _fixed(value):
    # format() never consults the locale, so the separator is always a dot
    text = f'{value:.6f}'
    return '0.000000' if text == '-0.000000' else text


def trace_rows(trace):
    for row in trace.rows:
        yield (
            _fixed(row.t), _fixed(row.s_global), str(row.segment_index), _fixed(row.mu_effective),
            *(_fixed(v) for v in row.v_track), _fixed(row.v_R),
            *(_fixed(d) for d in row.dist_track),
            *(_fixed(c) for c in row.compression),
            *(_fixed(tau) for tau in row.tau_out),
        )


def emit_csv(trace, destination):
    """
    Write the trace to a path or an open text file. Returns the number of
    data rows written.
    """
    if isinstance(destination, (str, os.PathLike)):
        with open(destination, 'w', encoding='utf-8', newline='') as handle:
            return emit_csv(trace, handle)
    writer = csv.writer(destination, lineterminator='\n')
    writer.writerow(CSV_HEADER)
    count = 0
    for values in trace_rows(trace):
        writer.writerow(values)
        count += 1
    return count
