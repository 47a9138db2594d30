#pragma once

#include "aeolus/core/errors.hpp"
#include "aeolus/fusion/pipeline.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

namespace aeolus::cli {

inline constexpr const char* kEstimatesSchema = "aeolus_estimates_v1";
inline constexpr const char* kEstimatesHeader =
    "t,px,py,pz,vx,vy,vz,qw,qx,qy,qz,ax,ay,az,"
    "accel_bias_x,accel_bias_y,accel_bias_z,"
    "vel_bias_x,vel_bias_y,vel_bias_z,baro_bias,baro_bias_rate,"
    "gyro_bias_x,gyro_bias_y,gyro_bias_z,status";
inline constexpr std::size_t kEstimatesColumns = 26;

inline void append_g17(std::string& out, double v) {
    char buf[40];
    const auto res =
        std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    out.append(buf, res.ptr);
}

/// Serialize an odometry result; 17-significant-digit cells reparse to the
/// exact same doubles, so downstream metrics reproduce bit-for-bit.
inline void write_estimates(const fusion::OdometryResult& result,
                            const std::string& path) {
    std::string out;
    out.reserve(result.rows.size() * 420 + 256);
    out += "# ";
    out += kEstimatesSchema;
    out += '\n';
    out += kEstimatesHeader;
    out += '\n';
    for (const auto& r : result.rows) {
        append_g17(out, r.t);
        const auto cell = [&out](double v) {
            out.push_back(',');
            append_g17(out, v);
        };
        for (int i = 0; i < 3; ++i) cell(r.state.p[i]);
        for (int i = 0; i < 3; ++i) cell(r.state.v[i]);
        cell(r.attitude.w);
        cell(r.attitude.x);
        cell(r.attitude.y);
        cell(r.attitude.z);
        for (int i = 0; i < 3; ++i) cell(r.state.a[i]);
        for (int i = 0; i < 3; ++i) cell(r.state.accel_bias[i]);
        for (int i = 0; i < 3; ++i) cell(r.state.vel_bias[i]);
        cell(r.state.baro_bias);
        cell(r.state.baro_bias_rate);
        for (int i = 0; i < 3; ++i) cell(r.gyro_bias[i]);
        out += (r.status == fusion::Status::InAir) ? ",1" : ",0";
        out += '\n';
    }
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw core::DataError("cannot open '" + path + "' for writing");
    f.write(out.data(), static_cast<std::streamsize>(out.size()));
    if (!f)
        throw core::DataError("write failed for '" + path + "'");
}

/// Parse an estimates file back into an odometry result; transition times
/// are reconstructed from the status column exactly as the live pipeline
/// recorded them (the instant of the first row with the new status).
inline fusion::OdometryResult read_estimates(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw core::DataError("cannot open '" + path + "' for reading");

    std::string line;
    if (!std::getline(f, line))
        throw core::DataError("'" + path + "' is empty");
    if (!line.empty() && line.back() == '\r')
        line.pop_back();
    if (line != std::string("# ") + kEstimatesSchema)
        throw core::DataError("'" + path + "': unsupported schema tag '" +
                              line + "'");
    if (!std::getline(f, line))
        throw core::DataError("'" + path + "' has no header row");
    if (!line.empty() && line.back() == '\r')
        line.pop_back();
    if (line != kEstimatesHeader)
        throw core::DataError("'" + path + "' has an unrecognized header row");

    fusion::OdometryResult result;
    fusion::Status prev = fusion::Status::OnGround;
    std::size_t row = 0;
    std::vector<std::string_view> cells;
    while (std::getline(f, line)) {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        ++row;
        cells.clear();
        std::string_view rest = line;
        while (true) {
            const std::size_t comma = rest.find(',');
            if (comma == std::string_view::npos) {
                cells.push_back(rest);
                break;
            }
            cells.push_back(rest.substr(0, comma));
            rest.remove_prefix(comma + 1);
        }
        if (cells.size() != kEstimatesColumns)
            throw core::DataError("row " + std::to_string(row) +
                                  ": expected " +
                                  std::to_string(kEstimatesColumns) +
                                  " columns, found " +
                                  std::to_string(cells.size()));
        std::size_t at = 0;
        const auto num = [&]() {
            const std::string_view c = cells[at++];
            double v = 0.0;
            const auto res = std::from_chars(c.data(), c.data() + c.size(), v);
            if (res.ec != std::errc{} || res.ptr != c.data() + c.size() ||
                !std::isfinite(v))
                throw core::DataError("row " + std::to_string(row) +
                                      ": malformed value '" + std::string(c) +
                                      "'");
            return v;
        };

        fusion::OdometryRow r;
        r.t = num();
        for (int i = 0; i < 3; ++i) r.state.p[i] = num();
        for (int i = 0; i < 3; ++i) r.state.v[i] = num();
        r.attitude.w = num();
        r.attitude.x = num();
        r.attitude.y = num();
        r.attitude.z = num();
        for (int i = 0; i < 3; ++i) r.state.a[i] = num();
        for (int i = 0; i < 3; ++i) r.state.accel_bias[i] = num();
        for (int i = 0; i < 3; ++i) r.state.vel_bias[i] = num();
        r.state.baro_bias = num();
        r.state.baro_bias_rate = num();
        for (int i = 0; i < 3; ++i) r.gyro_bias[i] = num();
        if (cells[at] == "1")
            r.status = fusion::Status::InAir;
        else if (cells[at] == "0")
            r.status = fusion::Status::OnGround;
        else
            throw core::DataError("row " + std::to_string(row) +
                                  ": status must be 0 or 1");

        if (r.status == fusion::Status::InAir && prev == fusion::Status::OnGround)
            result.takeoff_times.push_back(r.t);
        else if (r.status == fusion::Status::OnGround &&
                 prev == fusion::Status::InAir)
            result.landing_times.push_back(r.t);
        prev = r.status;
        result.rows.push_back(r);
    }
    return result;
}

} // namespace aeolus::cli
