#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace approxvit::dse {

struct CostRecord {
  std::string adder;
  unsigned width = 0;
  double area_um2 = 0;
  double power_uw = 0;
  std::optional<double> mae_pct;
  std::optional<double> ep_pct;
};

// Schema: adder,width,area_um2,power_uW[,mae_pct,ep_pct]. Throws ParseError
// with the 1-based line number for a missing column, a non-numeric or
// non-positive cell, or a duplicate adder.
std::vector<CostRecord> load_costs(std::string_view csv);

enum class MetricKind { kBer, kAccuracy };

std::string_view to_string(MetricKind kind) noexcept;
std::optional<MetricKind> parse_metric(std::string_view name);

struct AccuracyRow {
  std::string adder;
  double value = 0;
  bool corrupt = false;
};

// Reads an accuracy table with an `adder` column plus `ber` or
// `accuracy_pct`, and optionally `modulation` and `corrupt_flag` (so both
// sweep and tagger CSVs load). Rows of the same adder are averaged; the adder
// is corrupt when every one of its rows is flagged. `modulation` restricts to
// one scheme when given.
std::vector<AccuracyRow> load_accuracy(
    std::string_view csv, MetricKind metric,
    const std::optional<std::string>& modulation = std::nullopt);

struct DesignPoint {
  std::string adder;
  MetricKind metric = MetricKind::kBer;
  double accuracy = 0;  // BER or tagging accuracy %, per `metric`
  double area_um2 = 0;
  double power_uw = 0;
  bool corrupt = false;

  // Uniform minimization triple (BER or -accuracy, area, power).
  std::array<double, 3> objectives() const noexcept {
    return {metric == MetricKind::kBer ? accuracy : -accuracy, area_um2,
            power_uw};
  }
};

struct JoinResult {
  std::vector<DesignPoint> points;
  std::vector<std::string> skipped;  // accuracy rows without a cost record
};

// Inner join on adder name, in accuracy-table order. Throws ExplorationError
// when nothing joins.
JoinResult join_points(const std::vector<AccuracyRow>& accuracy,
                       MetricKind metric, const std::vector<CostRecord>& costs);

// a <= b in every objective and < in at least one.
bool dominates(const DesignPoint& a, const DesignPoint& b) noexcept;

struct ParetoFront {
  std::vector<std::size_t> indices;  // ascending positions in the input
  std::vector<DesignPoint> members;
};

// Non-dominated subset of the non-corrupt points. Points with identical
// objective vectors are all kept. Throws ExplorationError on an empty input
// or mixed metric kinds.
ParetoFront pareto_front(std::span<const DesignPoint> points);

struct Budget {
  std::optional<double> max_ber;
  std::optional<double> min_accuracy_pct;
  std::optional<double> max_area;
  std::optional<double> max_power;
  bool strict = true;           // '<' (and '>' for accuracy); false: '<=' / '>='
  bool exclude_corrupt = true;

  bool empty() const noexcept {
    return !max_ber && !min_accuracy_pct && !max_area && !max_power;
  }
};

// Points meeting every constraint, in input order. Throws InputError for an
// empty budget and ExplorationError for a metric constraint that does not
// match the points' metric.
std::vector<DesignPoint> filter_budget(std::span<const DesignPoint> points,
                                       const Budget& budget);

struct Saving {
  std::string adder;
  double area_saving_pct = 0;
  double power_saving_pct = 0;
  double accuracy_delta = 0;  // point minus baseline, native units
};

// saving = 100 * (baseline - value) / baseline for each point. Throws
// InputError if the baseline is not among the points.
std::vector<Saving> savings_report(std::span<const DesignPoint> points,
                                   std::string_view baseline);

struct ReportRow {
  DesignPoint point;
  bool pareto = false;
};

// All points with front membership, stably sorted by (accuracy objective,
// power, area).
std::vector<ReportRow> build_report(std::span<const DesignPoint> points,
                                    const ParetoFront& front);

enum class ReportFormat { kCsv, kJson };

std::string report_csv(const std::vector<ReportRow>& rows);
std::string report_json(const std::vector<ReportRow>& rows);

// Format from the extension (.json -> JSON, else CSV). Throws IoError.
void emit_report(const std::vector<ReportRow>& rows, const std::string& path);
void emit_report(const std::vector<ReportRow>& rows, const std::string& path,
                 ReportFormat format);

}  // namespace approxvit::dse
