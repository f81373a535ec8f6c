#pragma once

#include <span>
#include <string>
#include <vector>

#include "motioneval/io.hpp"
#include "motioneval/metrics.hpp"
#include "motioneval/stats.hpp"

namespace motioneval {

// Flattens a report into long-format metric rows (one row per joint, metric
// and source), suitable for write_metric_table.
std::vector<JointMetricRow> metric_rows(const MetricReport& report);

// Deterministic JSON serialization: same report, same bytes.
std::string write_report_json(const MetricReport& report);
MetricReport parse_report_json(const std::string& text);

std::string write_aggregate_json(const AggregateReport& report);

// Pools metric table rows into (task, joint) pairs per metric and runs the
// aggregate. Rows missing one side of a pair throw ValidationError.
AggregateReport aggregate_rows(std::span<const JointMetricRow> rows);

// Human-oriented CSV summary of an aggregate: one row per metric with the
// pooled means and test results.
std::string write_aggregate_csv(const AggregateReport& report);

} // namespace motioneval
