#include "steklov/spectrum.hpp"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "steklov/errors.hpp"

namespace steklov {

std::vector<double> SpectrumSeq::values() const {
    std::vector<double> v;
    v.reserve(entries.size());
    for (const auto& e : entries) v.push_back(e.value);
    return v;
}

void SpectrumSeq::sort() {
    std::stable_sort(entries.begin(), entries.end(),
                     [](const SpectrumEntry& a, const SpectrumEntry& b) {
                         if (a.value != b.value) return a.value < b.value;
                         if (a.component != b.component) return a.component < b.component;
                         return a.index < b.index;
                     });
}

SpectrumSeq merge_spectra(const std::vector<SpectrumSeq>& parts) {
    SpectrumSeq out;
    for (const auto& p : parts)
        out.entries.insert(out.entries.end(), p.entries.begin(), p.entries.end());
    out.sort();
    return out;
}

std::string format_sig12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void write_spectrum_csv(std::ostream& os, const SpectrumSeq& s) {
    os << "index,value,component\n";
    for (const auto& e : s.entries)
        os << e.index << ',' << format_sig12(e.value) << ',' << e.component << '\n';
}

SpectrumSeq read_spectrum_csv(std::istream& is) {
    SpectrumSeq out;
    std::string line;
    if (!std::getline(is, line)) throw IoError("spectrum csv: empty input");
    if (line.rfind("index,value", 0) != 0)
        throw IoError("spectrum csv: missing header row");
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string tok;
        SpectrumEntry e;
        if (!std::getline(ss, tok, ',')) throw IoError("spectrum csv: bad row: " + line);
        e.index = std::stol(tok);
        if (!std::getline(ss, tok, ',')) throw IoError("spectrum csv: bad row: " + line);
        e.value = std::stod(tok);
        std::getline(ss, e.component, ',');
        out.entries.push_back(e);
    }
    out.sort();
    return out;
}

}  // namespace steklov
