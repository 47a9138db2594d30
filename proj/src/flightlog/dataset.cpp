#include "aeolus/flightlog/dataset.hpp"

#include "aeolus/core/errors.hpp"

#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace aeolus::flightlog {

namespace {

constexpr const char* kBaseHeader =
    "t,anem_1,anem_2,anem_3,anem_4,ax,ay,az,gx,gy,gz,mx,my,mz,pressure,"
    "esc_1,esc_2,esc_3,esc_4,voltage,current";
constexpr const char* kTruthHeader =
    ",gt_px,gt_py,gt_pz,gt_vx,gt_vy,gt_vz,gt_ax,gt_ay,gt_az,"
    "gt_qw,gt_qx,gt_qy,gt_qz,status";
constexpr std::size_t kBaseColumns = 21;
constexpr std::size_t kTruthColumns = kBaseColumns + 14;

void append_number(std::string& out, double v) {
    char buf[40];
    // 17 significant digits round-trips every finite double exactly.
    const auto res =
        std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    out.append(buf, res.ptr);
}

void append_cell(std::string& out, double v) {
    out.push_back(',');
    append_number(out, v);
}

void append_cell(std::string& out, const std::optional<double>& v) {
    out.push_back(',');
    if (v)
        append_number(out, *v);
}

[[noreturn]] void row_error(std::size_t row, const std::string& what) {
    throw core::DataError("row " + std::to_string(row) + ": " + what);
}

double parse_cell(std::string_view cell, std::size_t row, const char* name) {
    double v = 0.0;
    const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (res.ec != std::errc{} || res.ptr != cell.data() + cell.size())
        row_error(row, std::string("malformed value for ") + name);
    if (!std::isfinite(v))
        row_error(row, std::string("non-finite value for ") + name);
    return v;
}

double required_cell(const std::vector<std::string_view>& cells,
                     std::size_t idx, std::size_t row, const char* name) {
    if (cells[idx].empty())
        row_error(row, std::string("missing value for ") + name);
    return parse_cell(cells[idx], row, name);
}

std::optional<double> optional_cell(const std::vector<std::string_view>& cells,
                                    std::size_t idx, std::size_t row,
                                    const char* name) {
    if (cells[idx].empty())
        return std::nullopt;
    return parse_cell(cells[idx], row, name);
}

void split_line(std::string_view line, std::vector<std::string_view>& out) {
    out.clear();
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            out.push_back(line.substr(start));
            return;
        }
        out.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

} // namespace

void write_dataset(const sim::FlightRecord& rec, const std::string& path) {
    bool has_gt = false;
    for (const auto& r : rec.rows)
        if (r.gt) {
            has_gt = true;
            break;
        }

    std::string out;
    out.reserve(rec.rows.size() * 220 + 256);
    out += "# ";
    out += kDatasetSchema;
    out += '\n';
    out += kBaseHeader;
    if (has_gt)
        out += kTruthHeader;
    out += '\n';

    for (const auto& r : rec.rows) {
        append_number(out, r.t);
        for (double a : r.anemo)
            append_cell(out, a);
        for (int i = 0; i < 3; ++i)
            append_cell(out, r.accel[i]);
        for (int i = 0; i < 3; ++i)
            append_cell(out, r.gyro[i]);
        for (int i = 0; i < 3; ++i)
            append_cell(out, r.mag[i]);
        append_cell(out, r.pressure_pa);
        for (double e : r.esc)
            append_cell(out, e);
        append_cell(out, r.voltage_v);
        append_cell(out, r.current_a);
        if (has_gt) {
            if (r.gt) {
                for (int i = 0; i < 3; ++i)
                    append_cell(out, r.gt->p[i]);
                for (int i = 0; i < 3; ++i)
                    append_cell(out, r.gt->v[i]);
                for (int i = 0; i < 3; ++i)
                    append_cell(out, r.gt->a[i]);
                append_cell(out, r.gt->q.w);
                append_cell(out, r.gt->q.x);
                append_cell(out, r.gt->q.y);
                append_cell(out, r.gt->q.z);
                out += r.gt->in_air ? ",1" : ",0";
            } else {
                out.append(14, ',');
            }
        }
        out += '\n';
    }

    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw core::DataError("cannot open '" + path + "' for writing");
    f.write(out.data(), static_cast<std::streamsize>(out.size()));
    if (!f)
        throw core::DataError("write failed for '" + path + "'");
}

sim::FlightRecord read_dataset(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw core::DataError("cannot open '" + path + "' for reading");

    std::string line;
    if (!std::getline(f, line))
        throw core::DataError("'" + path + "' is empty");
    if (!line.empty() && line.back() == '\r')
        line.pop_back();
    if (line.rfind("# ", 0) != 0 || line.substr(2) != kDatasetSchema)
        throw core::DataError("'" + path + "': unsupported schema tag '" +
                              line + "', expected '# " +
                              std::string(kDatasetSchema) + "'");

    if (!std::getline(f, line))
        throw core::DataError("'" + path + "' has no header row");
    if (!line.empty() && line.back() == '\r')
        line.pop_back();
    bool has_gt = false;
    if (line == std::string(kBaseHeader) + kTruthHeader)
        has_gt = true;
    else if (line != kBaseHeader)
        throw core::DataError("'" + path + "' has an unrecognized header row");
    const std::size_t want_cols = has_gt ? kTruthColumns : kBaseColumns;

    sim::FlightRecord rec;
    std::vector<std::string_view> cells;
    std::size_t row = 0;
    while (std::getline(f, line)) {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        ++row;
        split_line(line, cells);
        if (cells.size() != want_cols)
            row_error(row, "expected " + std::to_string(want_cols) +
                               " columns, found " + std::to_string(cells.size()));

        sim::SensorSample s;
        s.t = required_cell(cells, 0, row, "t");
        if (!rec.rows.empty() && s.t <= rec.rows.back().t)
            row_error(row, "time is not strictly increasing");
        for (int i = 0; i < 4; ++i)
            s.anemo[static_cast<std::size_t>(i)] =
                required_cell(cells, 1 + static_cast<std::size_t>(i), row, "anem");
        for (int i = 0; i < 3; ++i)
            s.accel[i] = required_cell(cells, 5 + static_cast<std::size_t>(i),
                                       row, "accel");
        for (int i = 0; i < 3; ++i)
            s.gyro[i] =
                required_cell(cells, 8 + static_cast<std::size_t>(i), row, "gyro");
        for (int i = 0; i < 3; ++i)
            s.mag[i] =
                required_cell(cells, 11 + static_cast<std::size_t>(i), row, "mag");
        s.pressure_pa = optional_cell(cells, 14, row, "pressure");
        for (int i = 0; i < 4; ++i)
            s.esc[static_cast<std::size_t>(i)] =
                required_cell(cells, 15 + static_cast<std::size_t>(i), row, "esc");
        s.voltage_v = optional_cell(cells, 19, row, "voltage");
        s.current_a = optional_cell(cells, 20, row, "current");

        if (has_gt) {
            bool any = false, all = true;
            for (std::size_t c = kBaseColumns; c < kTruthColumns; ++c) {
                if (cells[c].empty())
                    all = false;
                else
                    any = true;
            }
            if (any && !all)
                row_error(row, "partial ground-truth block");
            if (all) {
                sim::GroundTruth gt;
                for (int i = 0; i < 3; ++i)
                    gt.p[i] = parse_cell(cells[21 + static_cast<std::size_t>(i)],
                                         row, "gt_p");
                for (int i = 0; i < 3; ++i)
                    gt.v[i] = parse_cell(cells[24 + static_cast<std::size_t>(i)],
                                         row, "gt_v");
                for (int i = 0; i < 3; ++i)
                    gt.a[i] = parse_cell(cells[27 + static_cast<std::size_t>(i)],
                                         row, "gt_a");
                gt.q.w = parse_cell(cells[30], row, "gt_qw");
                gt.q.x = parse_cell(cells[31], row, "gt_qx");
                gt.q.y = parse_cell(cells[32], row, "gt_qy");
                gt.q.z = parse_cell(cells[33], row, "gt_qz");
                if (cells[34] == "1")
                    gt.in_air = true;
                else if (cells[34] == "0")
                    gt.in_air = false;
                else
                    row_error(row, "status must be 0 or 1");
                s.gt = gt;
            }
        }
        rec.rows.push_back(s);
    }

    // The grid rate is implied by the time column; snap the reciprocal of
    // the first step to the nearest integer to undo decimal round-trip fuzz.
    if (rec.rows.size() >= 2) {
        const double r = 1.0 / (rec.rows[1].t - rec.rows[0].t);
        const double snapped = std::round(r);
        rec.rate_hz = (std::abs(r - snapped) < 1e-6 * snapped) ? snapped : r;
    }
    return rec;
}

} // namespace aeolus::flightlog
