#include "rumorsis/table.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace rumorsis::io {

namespace {

std::string csv_field(const Cell& c)
{
    struct Visitor {
        std::string operator()(std::monostate) const { return {}; }
        std::string operator()(double v) const { return format_double(v); }
        std::string operator()(bool v) const { return v ? "true" : "false"; }
        std::string operator()(const std::string& s) const { return s; }
    };
    return std::visit(Visitor{}, c);
}

nlohmann::ordered_json json_value(const Cell& c)
{
    struct Visitor {
        nlohmann::ordered_json operator()(std::monostate) const { return nullptr; }
        nlohmann::ordered_json operator()(double v) const
        {
            if (!std::isfinite(v))
                return nullptr;
            return v;
        }
        nlohmann::ordered_json operator()(bool v) const { return v; }
        nlohmann::ordered_json operator()(const std::string& s) const { return s; }
    };
    return std::visit(Visitor{}, c);
}

} // namespace

std::string format_double(double v)
{
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_csv(std::ostream& os, const Document& doc)
{
    for (const auto& [key, value] : doc.meta)
        os << "# " << key << ": " << value << '\n';
    for (std::size_t i = 0; i < doc.columns.size(); ++i)
        os << (i ? "," : "") << doc.columns[i];
    os << '\n';
    for (const auto& row : doc.rows) {
        if (row.size() != doc.columns.size())
            throw std::logic_error("row width does not match header");
        for (std::size_t i = 0; i < row.size(); ++i)
            os << (i ? "," : "") << csv_field(row[i]);
        os << '\n';
    }
    for (const auto& [key, value] : doc.summary)
        os << "# summary " << key << ": " << csv_field(value) << '\n';
}

void write_json(std::ostream& os, const Document& doc)
{
    nlohmann::ordered_json j;
    j["meta"] = nlohmann::ordered_json::object();
    for (const auto& [key, value] : doc.meta)
        j["meta"][key] = value;
    j["columns"] = doc.columns;
    j["rows"] = nlohmann::ordered_json::array();
    for (const auto& row : doc.rows) {
        if (row.size() != doc.columns.size())
            throw std::logic_error("row width does not match header");
        nlohmann::ordered_json r = nlohmann::ordered_json::object();
        for (std::size_t i = 0; i < row.size(); ++i)
            r[doc.columns[i]] = json_value(row[i]);
        j["rows"].push_back(std::move(r));
    }
    j["summary"] = nlohmann::ordered_json::object();
    for (const auto& [key, value] : doc.summary)
        j["summary"][key] = json_value(value);
    os << j.dump(2) << '\n';
}

void write(std::ostream& os, const Document& doc, Format format)
{
    if (format == Format::Json)
        write_json(os, doc);
    else
        write_csv(os, doc);
}

} // namespace rumorsis::io
