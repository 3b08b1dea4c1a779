#include "risfso_cli/emit.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "risfso/error.hpp"

namespace risfso::cli
{
namespace
{
std::string csv_field(std::string const& s)
{
    if (s.find_first_of(",\"\n\r") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s)
    {
        if (c == '"')
            out += '"';
        out += c;
    }
    return out + "\"";
}

std::vector<std::string> meta_keys(std::vector<MetricCurve> const& curves)
{
    std::vector<std::string> keys;
    for (auto const& c : curves)
    {
        for (auto const& f : c.meta)
        {
            if (std::find(keys.begin(), keys.end(), f.key) == keys.end())
                keys.push_back(f.key);
        }
    }
    return keys;
}

}  // namespace

Format parse_format(std::string_view text)
{
    if (text == "csv")
        return Format::csv;
    if (text == "json")
        return Format::json;
    throw SchemaError("unknown format '" + std::string(text) + "' (expected csv or json)");
}

void write_csv(std::ostream& out, std::vector<MetricCurve> const& curves)
{
    auto const keys = meta_keys(curves);
    out << "x,y,curve_id";
    for (auto const& k : keys)
        out << ',' << csv_field(k);
    out << '\n';
    for (auto const& c : curves)
    {
        std::vector<std::string> row_meta(keys.size());
        for (auto const& f : c.meta)
        {
            auto const it = std::find(keys.begin(), keys.end(), f.key);
            row_meta[static_cast<std::size_t>(it - keys.begin())] = csv_field(f.value);
        }
        std::string const id = csv_field(c.curve_id);
        for (std::size_t i = 0; i < c.x.size(); ++i)
        {
            out << format_number(c.x[i]) << ',';
            if (std::isfinite(c.y[i]))
                out << format_number(c.y[i]);
            out << ',' << id;
            for (auto const& v : row_meta)
                out << ',' << v;
            out << '\n';
        }
    }
}

nlohmann::ordered_json to_json(std::vector<MetricCurve> const& curves)
{
    using nlohmann::ordered_json;
    ordered_json list = ordered_json::array();
    for (auto const& c : curves)
    {
        ordered_json y = ordered_json::array();
        for (double v : c.y)
            y.push_back(std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr));
        ordered_json meta = ordered_json::object();
        for (auto const& f : c.meta)
            meta[f.key] = f.value;
        list.push_back({
            {"curve_id", c.curve_id},
            {"x", c.x},
            {"y", std::move(y)},
            {"meta", std::move(meta)},
            {"diagnostics", c.diagnostics},
        });
    }
    return {{"curves", std::move(list)}};
}

std::vector<MetricCurve> curves_from_json(nlohmann::ordered_json const& doc)
{
    std::vector<MetricCurve> out;
    try
    {
        for (auto const& item : doc.at("curves"))
        {
            MetricCurve c;
            c.curve_id = item.at("curve_id").get<std::string>();
            c.x = item.at("x").get<std::vector<double>>();
            for (auto const& v : item.at("y"))
                c.y.push_back(v.is_null() ? std::numeric_limits<double>::quiet_NaN()
                                          : v.get<double>());
            for (auto const& [k, v] : item.at("meta").items())
                c.meta.push_back({k, v.get<std::string>()});
            c.diagnostics = item.at("diagnostics").get<std::vector<std::string>>();
            if (c.x.size() != c.y.size())
                throw SchemaError("curve '" + c.curve_id + "': x and y differ in length");
            out.push_back(std::move(c));
        }
    }
    catch (nlohmann::json::exception const& e)
    {
        throw SchemaError(std::string("malformed curve document: ") + e.what());
    }
    return out;
}

void write_json(std::ostream& out, std::vector<MetricCurve> const& curves)
{
    out << to_json(curves).dump(2) << '\n';
}

void emit(std::vector<MetricCurve> const& curves, Format format, std::string const& path)
{
    auto write = [&](std::ostream& os) {
        if (format == Format::csv)
            write_csv(os, curves);
        else
            write_json(os, curves);
    };
    if (path.empty() || path == "-")
    {
        write(std::cout);
        std::cout.flush();
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file)
        throw std::runtime_error("cannot open '" + path + "' for writing");
    write(file);
    file.flush();
    if (!file)
        throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace risfso::cli
