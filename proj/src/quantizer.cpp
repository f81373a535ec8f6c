#include "motioneval/quantizer.hpp"

#include "motioneval/error.hpp"
#include "motioneval/io.hpp"

#include "parse_util.hpp"

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

namespace motioneval {

namespace {

double squared_distance(std::span<const double> a, std::span<const double> b) {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double diff = a[i] - b[i];
        sum += diff * diff;
    }
    return sum;
}

void require_same_size(std::span<const double> a, std::span<const double> b,
                       const char* what) {
    if (a.size() != b.size()) {
        throw ValidationError(std::string(what) + " dimensions differ: " +
                              std::to_string(a.size()) + " vs " + std::to_string(b.size()));
    }
}

} // namespace

Codebook parse_codebook_csv(const std::string& text) {
    Codebook book;
    std::size_t line_number = 0;
    for (std::string_view raw : detail::split(text, '\n')) {
        ++line_number;
        const std::string_view line = detail::trim(raw);
        if (line.empty() || line[0] == '#') {
            continue;
        }
        std::vector<double> entry;
        for (std::string_view field : detail::split(line, ',')) {
            entry.push_back(detail::parse_finite(field, "codebook value"));
        }
        if (book.entries.empty()) {
            book.dim = entry.size();
        } else if (entry.size() != book.dim) {
            throw ParseError("codebook line " + std::to_string(line_number) + " has " +
                             std::to_string(entry.size()) + " values, expected " +
                             std::to_string(book.dim));
        }
        book.entries.push_back(std::move(entry));
    }
    if (book.entries.empty()) {
        throw ParseError("codebook has no entries");
    }
    return book;
}

std::string write_codebook_csv(const Codebook& book) {
    if (book.entries.empty() || book.dim == 0) {
        throw ValidationError("cannot write an empty codebook");
    }
    std::string out;
    for (const std::vector<double>& entry : book.entries) {
        if (entry.size() != book.dim) {
            throw ValidationError("codebook entry dimension mismatch");
        }
        for (std::size_t i = 0; i < entry.size(); ++i) {
            if (i > 0) {
                out += ',';
            }
            out += format_g9(entry[i]);
        }
        out += '\n';
    }
    return out;
}

std::size_t nearest_code(const Codebook& book, std::span<const double> z) {
    if (book.entries.empty()) {
        throw ValidationError("codebook has no entries");
    }
    if (z.size() != book.dim) {
        throw ValidationError("query dimension " + std::to_string(z.size()) +
                              " does not match codebook dimension " +
                              std::to_string(book.dim));
    }
    std::size_t best = 0;
    double best_distance = squared_distance(z, book.entries[0]);
    for (std::size_t i = 1; i < book.entries.size(); ++i) {
        const double dist = squared_distance(z, book.entries[i]);
        if (dist < best_distance) {
            best = i;
            best_distance = dist;
        }
    }
    return best + 1;
}

double vq_loss(std::span<const double> raw, std::span<const double> reconstructed,
               std::span<const double> encoding, std::span<const double> code,
               double beta) {
    require_same_size(raw, reconstructed, "reconstruction");
    require_same_size(encoding, code, "latent");
    if (!(beta >= 0.0)) {
        throw ValidationError("beta must be nonnegative");
    }
    return squared_distance(raw, reconstructed) +
           (1.0 + beta) * squared_distance(encoding, code);
}

} // namespace motioneval
