#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "nbrange/channel.hpp"
#include "nbrange/common.hpp"

namespace nbrange {

/// Capture file format: three header lines (f0_hz, delta_f_hz, K), then one
/// record per tone:  index, avail(0/1), interfered(0/1), re_I, im_I, re_R, im_R
/// Values are printed with 17 significant digits so captures round-trip to
/// the bit.
inline void write_capture(std::ostream& out, const IQCapture& cap) {
    char buf[512];
    std::snprintf(buf, sizeof(buf), "f0_hz %.17g\n", cap.grid.f0_hz);
    out << buf;
    std::snprintf(buf, sizeof(buf), "delta_f_hz %.17g\n", cap.grid.delta_f_hz);
    out << buf;
    out << "K " << cap.grid.num_tones << "\n";
    for (int k = 0; k < cap.grid.num_tones; ++k) {
        std::snprintf(buf, sizeof(buf), "%d, %d, %d, %.17g, %.17g, %.17g, %.17g\n", k,
                      cap.available[k] ? 1 : 0, cap.interfered[k] ? 1 : 0, cap.iq_initiator[k].real(),
                      cap.iq_initiator[k].imag(), cap.iq_reflector[k].real(), cap.iq_reflector[k].imag());
        out << buf;
    }
}

inline void write_capture_file(const std::string& path, const IQCapture& cap) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("write_capture_file: cannot open " + path);
    write_capture(f, cap);
    if (!f) throw std::runtime_error("write_capture_file: write failed for " + path);
}

struct CaptureParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

[[noreturn]] inline void parse_fail(int line, const std::string& what) {
    throw CaptureParseError("capture parse error at line " + std::to_string(line) + ": " + what);
}

inline std::string next_line(std::istream& in, int& line_no) {
    std::string line;
    if (!std::getline(in, line)) parse_fail(line_no + 1, "unexpected end of file");
    ++line_no;
    return line;
}

inline double header_value(const std::string& line, const std::string& key, int line_no) {
    std::istringstream ss(line);
    std::string k;
    double v = 0.0;
    if (!(ss >> k >> v) || k != key) parse_fail(line_no, "expected '" + key + " <value>'");
    return v;
}

} // namespace detail

inline IQCapture read_capture(std::istream& in) {
    int line_no = 0;
    IQCapture cap;
    cap.grid.f0_hz = detail::header_value(detail::next_line(in, line_no), "f0_hz", line_no);
    cap.grid.delta_f_hz = detail::header_value(detail::next_line(in, line_no), "delta_f_hz", line_no);
    const double k_raw = detail::header_value(detail::next_line(in, line_no), "K", line_no);
    cap.grid.num_tones = static_cast<int>(k_raw);
    if (cap.grid.num_tones < 2 || cap.grid.num_tones != k_raw) detail::parse_fail(line_no, "bad tone count");
    cap.grid.validate();

    const int k_count = cap.grid.num_tones;
    cap.iq_initiator.resize(k_count);
    cap.iq_reflector.resize(k_count);
    cap.available.resize(k_count);
    cap.interfered.resize(k_count);
    for (int k = 0; k < k_count; ++k) {
        std::string line = detail::next_line(in, line_no);
        for (auto& c : line)
            if (c == ',') c = ' ';
        std::istringstream ss(line);
        int idx = 0, avail = 0, interf = 0;
        double ri = 0, ii = 0, rr = 0, ir = 0;
        if (!(ss >> idx >> avail >> interf >> ri >> ii >> rr >> ir))
            detail::parse_fail(line_no, "malformed tone record");
        if (idx != k) detail::parse_fail(line_no, "tone index out of order");
        if ((avail != 0 && avail != 1) || (interf != 0 && interf != 1))
            detail::parse_fail(line_no, "masks must be 0 or 1");
        cap.available[k] = static_cast<uint8_t>(avail);
        cap.interfered[k] = static_cast<uint8_t>(interf);
        cap.iq_initiator[k] = cdouble(ri, ii);
        cap.iq_reflector[k] = cdouble(rr, ir);
    }
    return cap;
}

inline IQCapture read_capture_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("read_capture_file: cannot open " + path);
    return read_capture(f);
}

} // namespace nbrange
