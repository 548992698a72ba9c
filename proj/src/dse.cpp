#include "approxvit/dse.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "approxvit/errors.hpp"
#include "approxvit/format.hpp"

namespace approxvit::dse {
namespace {

struct CsvRow {
  std::size_t line;
  std::vector<std::string> cells;
};

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<CsvRow> read_csv(std::string_view text) {
  std::vector<CsvRow> rows;
  std::istringstream in{std::string(text)};
  std::size_t line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (trim(line).empty()) continue;
    CsvRow row{line_no, {}};
    std::istringstream cells(line);
    for (std::string c; std::getline(cells, c, ',');) row.cells.push_back(trim(c));
    if (!line.empty() && line.back() == ',') row.cells.emplace_back();
    rows.push_back(std::move(row));
  }
  return rows;
}

class Columns {
 public:
  explicit Columns(const CsvRow& header) : line_(header.line) {
    for (std::size_t i = 0; i < header.cells.size(); ++i)
      index_[header.cells[i]] = i;
  }
  bool has(const std::string& name) const { return index_.count(name) != 0; }
  std::size_t at(const std::string& name) const {
    const auto it = index_.find(name);
    if (it == index_.end()) throw ParseError(line_, "missing column '" + name + "'");
    return it->second;
  }

 private:
  std::size_t line_;
  std::map<std::string, std::size_t> index_;
};

const std::string& cell(const CsvRow& row, std::size_t col) {
  if (col >= row.cells.size())
    throw ParseError(row.line, "row has " + std::to_string(row.cells.size()) +
                                   " cells");
  return row.cells[col];
}

double number(const CsvRow& row, std::size_t col, const char* what) {
  const std::string& s = cell(row, col);
  double v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc{} || res.ptr != s.data() + s.size() ||
      !std::isfinite(v))
    throw ParseError(row.line, std::string(what) + " '" + s + "' is not a number");
  return v;
}

bool flag(const CsvRow& row, std::size_t col) {
  const std::string& s = cell(row, col);
  if (s == "1" || s == "true") return true;
  if (s == "0" || s == "false" || s.empty()) return false;
  throw ParseError(row.line, "flag '" + s + "' is not 0/1");
}

}  // namespace

std::vector<CostRecord> load_costs(std::string_view csv) {
  const auto rows = read_csv(csv);
  if (rows.empty()) throw ParseError(1, "empty cost table");
  const Columns cols(rows.front());
  const std::size_t c_adder = cols.at("adder");
  const std::size_t c_width = cols.at("width");
  const std::size_t c_area = cols.at("area_um2");
  const std::size_t c_power = cols.at("power_uW");
  const bool has_mae = cols.has("mae_pct");
  const bool has_ep = cols.has("ep_pct");

  std::vector<CostRecord> out;
  std::set<std::string> seen;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const CsvRow& row = rows[i];
    CostRecord r;
    r.adder = cell(row, c_adder);
    if (r.adder.empty()) throw ParseError(row.line, "empty adder name");
    if (!seen.insert(r.adder).second)
      throw ParseError(row.line, "duplicate adder '" + r.adder + "'");
    const double width = number(row, c_width, "width");
    if (width < 1 || width != std::floor(width))
      throw ParseError(row.line, "width must be a positive integer");
    r.width = static_cast<unsigned>(width);
    r.area_um2 = number(row, c_area, "area_um2");
    r.power_uw = number(row, c_power, "power_uW");
    if (r.area_um2 <= 0 || r.power_uw <= 0)
      throw ParseError(row.line, "area and power must be > 0");
    if (has_mae && !cell(row, cols.at("mae_pct")).empty())
      r.mae_pct = number(row, cols.at("mae_pct"), "mae_pct");
    if (has_ep && !cell(row, cols.at("ep_pct")).empty())
      r.ep_pct = number(row, cols.at("ep_pct"), "ep_pct");
    out.push_back(std::move(r));
  }
  return out;
}

std::string_view to_string(MetricKind kind) noexcept {
  return kind == MetricKind::kBer ? "ber" : "accuracy";
}

std::optional<MetricKind> parse_metric(std::string_view name) {
  if (name == "ber") return MetricKind::kBer;
  if (name == "accuracy") return MetricKind::kAccuracy;
  return std::nullopt;
}

std::vector<AccuracyRow> load_accuracy(
    std::string_view csv, MetricKind metric,
    const std::optional<std::string>& modulation) {
  const auto rows = read_csv(csv);
  if (rows.empty()) throw ParseError(1, "empty accuracy table");
  const Columns cols(rows.front());
  const std::size_t c_adder = cols.at("adder");
  const std::size_t c_value =
      cols.at(metric == MetricKind::kBer ? "ber" : "accuracy_pct");
  const bool has_mod = cols.has("modulation");
  const bool has_flag = cols.has("corrupt_flag");

  struct Acc {
    double sum = 0;
    std::size_t n = 0;
    bool corrupt = true;
  };
  std::vector<std::string> order;
  std::map<std::string, Acc> acc;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const CsvRow& row = rows[i];
    if (modulation && has_mod && cell(row, cols.at("modulation")) != *modulation)
      continue;
    const std::string& name = cell(row, c_adder);
    auto [it, inserted] = acc.try_emplace(name);
    if (inserted) order.push_back(name);
    it->second.sum += number(row, c_value, "accuracy value");
    ++it->second.n;
    // Corrupt only if every row is: at low SNR the exact adder garbles text too.
    it->second.corrupt &= has_flag && flag(row, cols.at("corrupt_flag"));
  }
  std::vector<AccuracyRow> out;
  for (const auto& name : order) {
    const Acc& a = acc[name];
    out.push_back({name, a.sum / static_cast<double>(a.n), a.corrupt});
  }
  return out;
}

JoinResult join_points(const std::vector<AccuracyRow>& accuracy,
                       MetricKind metric, const std::vector<CostRecord>& costs) {
  std::map<std::string, const CostRecord*> by_name;
  for (const auto& c : costs) by_name[c.adder] = &c;
  JoinResult r;
  for (const auto& a : accuracy) {
    const auto it = by_name.find(a.adder);
    if (it == by_name.end()) {
      r.skipped.push_back(a.adder);
      continue;
    }
    r.points.push_back({a.adder, metric, a.value, it->second->area_um2,
                        it->second->power_uw, a.corrupt});
  }
  if (r.points.empty())
    throw ExplorationError("no accuracy row matches a cost record");
  return r;
}

bool dominates(const DesignPoint& a, const DesignPoint& b) noexcept {
  const auto x = a.objectives();
  const auto y = b.objectives();
  bool strictly = false;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] > y[i]) return false;
    strictly |= x[i] < y[i];
  }
  return strictly;
}

namespace {

void check_single_metric(std::span<const DesignPoint> points) {
  for (const auto& p : points)
    if (p.metric != points.front().metric)
      throw ExplorationError("design points mix BER and accuracy metrics");
}

}  // namespace

ParetoFront pareto_front(std::span<const DesignPoint> points) {
  if (points.empty()) throw ExplorationError("no design points");
  check_single_metric(points);

  // A dominator always precedes its victim in lexicographic objective order,
  // so one sorted pass against the front found so far suffices.
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < points.size(); ++i)
    if (!points[i].corrupt) order.push_back(i);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return points[a].objectives() < points[b].objectives();
  });

  ParetoFront front;
  for (std::size_t i : order) {
    const bool beaten = std::any_of(
        front.indices.begin(), front.indices.end(),
        [&](std::size_t f) { return dominates(points[f], points[i]); });
    if (!beaten) front.indices.push_back(i);
  }
  std::sort(front.indices.begin(), front.indices.end());
  for (std::size_t i : front.indices) front.members.push_back(points[i]);
  return front;
}

std::vector<DesignPoint> filter_budget(std::span<const DesignPoint> points,
                                       const Budget& budget) {
  if (budget.empty()) throw InputError("budget needs at least one constraint");
  check_single_metric(points);
  if (!points.empty()) {
    const MetricKind kind = points.front().metric;
    if (budget.max_ber && kind != MetricKind::kBer)
      throw ExplorationError("BER bound given for accuracy-metric points");
    if (budget.min_accuracy_pct && kind != MetricKind::kAccuracy)
      throw ExplorationError("accuracy bound given for BER-metric points");
  }
  auto below = [&](double v, const std::optional<double>& limit) {
    return !limit || (budget.strict ? v < *limit : v <= *limit);
  };
  auto above = [&](double v, const std::optional<double>& limit) {
    return !limit || (budget.strict ? v > *limit : v >= *limit);
  };

  std::vector<DesignPoint> out;
  for (const auto& p : points) {
    if (budget.exclude_corrupt && p.corrupt) continue;
    const bool ok =
        (p.metric == MetricKind::kBer ? below(p.accuracy, budget.max_ber)
                                      : above(p.accuracy, budget.min_accuracy_pct)) &&
        below(p.area_um2, budget.max_area) && below(p.power_uw, budget.max_power);
    if (ok) out.push_back(p);
  }
  return out;
}

std::vector<Saving> savings_report(std::span<const DesignPoint> points,
                                   std::string_view baseline) {
  const auto base = std::find_if(points.begin(), points.end(),
                                 [&](const auto& p) { return p.adder == baseline; });
  if (base == points.end())
    throw InputError("baseline '" + std::string(baseline) + "' not among the points");
  std::vector<Saving> out;
  for (const auto& p : points) {
    out.push_back({p.adder, 100.0 * (base->area_um2 - p.area_um2) / base->area_um2,
                   100.0 * (base->power_uw - p.power_uw) / base->power_uw,
                   p.accuracy - base->accuracy});
  }
  return out;
}

std::vector<ReportRow> build_report(std::span<const DesignPoint> points,
                                    const ParetoFront& front) {
  std::vector<ReportRow> rows;
  for (std::size_t i = 0; i < points.size(); ++i) {
    rows.push_back({points[i], std::binary_search(front.indices.begin(),
                                                  front.indices.end(), i)});
  }
  std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    const auto x = a.point.objectives();
    const auto y = b.point.objectives();
    return std::tie(x[0], x[2], x[1]) < std::tie(y[0], y[2], y[1]);
  });
  return rows;
}

std::string report_csv(const std::vector<ReportRow>& rows) {
  std::ostringstream out;
  out << "adder,metric,accuracy,area_um2,power_uW,pareto,corrupt_flag\n";
  for (const auto& r : rows) {
    out << r.point.adder << ',' << to_string(r.point.metric) << ','
        << format_double(r.point.accuracy) << ',' << format_double(r.point.area_um2)
        << ',' << format_double(r.point.power_uw) << ',' << (r.pareto ? 1 : 0)
        << ',' << (r.point.corrupt ? 1 : 0) << '\n';
  }
  return out.str();
}

std::string report_json(const std::vector<ReportRow>& rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rows) {
    arr.push_back({{"adder", r.point.adder},
                   {"metric", to_string(r.point.metric)},
                   {"accuracy", r.point.accuracy},
                   {"area_um2", r.point.area_um2},
                   {"power_uW", r.point.power_uw},
                   {"pareto", r.pareto},
                   {"corrupt_flag", r.point.corrupt}});
  }
  return arr.dump(2) + "\n";
}

void emit_report(const std::vector<ReportRow>& rows, const std::string& path) {
  const bool json = path.size() >= 5 && path.substr(path.size() - 5) == ".json";
  emit_report(rows, path, json ? ReportFormat::kJson : ReportFormat::kCsv);
}

void emit_report(const std::vector<ReportRow>& rows, const std::string& path,
                 ReportFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write report '" + path + "'");
  out << (format == ReportFormat::kJson ? report_json(rows) : report_csv(rows));
  if (!out) throw IoError("failed writing report '" + path + "'");
}

}  // namespace approxvit::dse
