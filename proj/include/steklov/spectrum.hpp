#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace steklov {

struct SpectrumEntry {
    double value = 0.0;
    long index = 0;  // component enumeration index (ℤ) or merged rank (ℕ)
    std::string component;
};

/// Sorted real eigenvalue multiset with optional per-component enumeration
/// labels carried along.
struct SpectrumSeq {
    std::vector<SpectrumEntry> entries;  // nondecreasing in value

    std::size_t size() const { return entries.size(); }
    std::vector<double> values() const;
    void sort();
};

SpectrumSeq merge_spectra(const std::vector<SpectrumSeq>& parts);

/// CSV format: header "index,value,component", values with 12 significant
/// digits.
void write_spectrum_csv(std::ostream& os, const SpectrumSeq& s);
SpectrumSeq read_spectrum_csv(std::istream& is);

std::string format_sig12(double v);

}  // namespace steklov
