#include "output.hpp"

#include "qfric/errors.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace qfric::cli {

std::string cell(double x)
{
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os.precision(17);
    os << x;
    return os.str();
}

std::string to_csv(const Table& t)
{
    std::string s;
    auto line = [&](const std::vector<std::string>& fields) {
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i > 0)
                s += ',';
            s += fields[i];
        }
        s += '\n';
    };
    line(t.columns);
    for (const auto& row : t.rows)
        line(row);
    return s;
}

void write_file(const std::string& path, const std::string& content)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw Error(ErrorKind::Io, "cannot open " + path + " for writing");
    out << content;
    out.close();
    if (!out)
        throw Error(ErrorKind::Io, "failed writing " + path);
}

std::string sidecar(const Json& config, const Json& diagnostics)
{
    Json j;
    j["config"] = config;
    j["diagnostics"] = diagnostics;
    return j.dump(2) + "\n";
}

namespace {

Json json_cell(const std::string& s)
{
    if (s.empty())
        return nullptr;
    std::size_t used = 0;
    try {
        const double x = std::stod(s, &used);
        if (used == s.size() && std::isfinite(x))
            return x;
    } catch (const std::exception&) {
    }
    return s;
}

}

void emit(const std::string& path, const std::string& format, const Json& config, const Json& diagnostics,
          const Table& t)
{
    if (format == "json") {
        Json j;
        j["config"] = config;
        j["diagnostics"] = diagnostics;
        j["columns"] = t.columns;
        Json rows = Json::array();
        for (const auto& row : t.rows) {
            Json r = Json::array();
            for (const auto& c : row)
                r.push_back(json_cell(c));
            rows.push_back(std::move(r));
        }
        j["rows"] = std::move(rows);
        write_file(path, j.dump(2) + "\n");
        return;
    }
    write_file(path, to_csv(t));
    write_file(path + ".json", sidecar(config, diagnostics));
}

}
