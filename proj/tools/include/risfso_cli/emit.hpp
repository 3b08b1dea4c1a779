#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "risfso_cli/sweep.hpp"

namespace risfso::cli
{
enum class Format
{
    csv,
    json,
};

Format parse_format(std::string_view text);

// CSV: header "x,y,curve_id,<meta keys...>", one row per point, empty y for
// gaps. Meta columns are the union of keys in first-seen order.
void write_csv(std::ostream& out, std::vector<MetricCurve> const& curves);
// JSON: {"curves": [{"curve_id", "x", "y", "meta", "diagnostics"}]}, null
// for gaps.
void write_json(std::ostream& out, std::vector<MetricCurve> const& curves);

nlohmann::ordered_json to_json(std::vector<MetricCurve> const& curves);
std::vector<MetricCurve> curves_from_json(nlohmann::ordered_json const& doc);

// Writes to `path`, or to stdout when `path` is empty or "-". Throws
// std::runtime_error naming the path on I/O failure.
void emit(std::vector<MetricCurve> const& curves, Format format, std::string const& path);

}  // namespace risfso::cli
