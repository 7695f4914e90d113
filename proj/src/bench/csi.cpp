#include "risim/bench/csi.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <sstream>
#include <tuple>

#include "risim/errors.hpp"

namespace risim::bench {

namespace {

std::string trimmed(const std::string& s) {
    std::size_t begin = 0;
    std::size_t end = s.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(s[begin]))) {
        ++begin;
    }
    while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1]))) {
        --end;
    }
    return s.substr(begin, end - begin);
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(trimmed(line.substr(start)));
            return fields;
        }
        fields.push_back(trimmed(line.substr(start, comma - start)));
        start = comma + 1;
    }
}

double parse_double(const std::string& s, std::size_t line_no, const char* what) {
    char* end = nullptr;
    const double value = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || s.empty()) {
        throw ParseError(std::string("malformed ") + what + " '" + s + "'", line_no);
    }
    return value;
}

// "re+imi" / "re-imi" with a mandatory trailing 'i'. The separating sign is
// the first +/- after position 0 that is not an exponent sign.
Complex parse_complex(const std::string& s, std::size_t line_no) {
    if (s.size() < 2 || s.back() != 'i') {
        throw ParseError("complex literal '" + s + "' must end in 'i'", line_no);
    }
    std::size_t split = std::string::npos;
    for (std::size_t i = 1; i + 1 < s.size(); ++i) {
        if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
            split = i;
            break;
        }
    }
    if (split == std::string::npos) {
        throw ParseError("complex literal '" + s + "' lacks an imaginary part", line_no);
    }
    const double re = parse_double(s.substr(0, split), line_no, "real part");
    const double im = parse_double(s.substr(split, s.size() - 1 - split), line_no,
                                   "imaginary part");
    if (!std::isfinite(re) || !std::isfinite(im)) {
        throw ParseError("complex literal '" + s + "' is not finite", line_no);
    }
    return {re, im};
}

std::uint64_t parse_unsigned(const std::string& s, std::size_t line_no, const char* what) {
    if (s.empty() || s[0] == '-') {
        throw ParseError(std::string("malformed ") + what + " '" + s + "'", line_no);
    }
    char* end = nullptr;
    const unsigned long long value = std::strtoull(s.c_str(), &end, 10);
    if (end != s.c_str() + s.size()) {
        throw ParseError(std::string("malformed ") + what + " '" + s + "'", line_no);
    }
    return value;
}

std::pair<std::size_t, std::size_t> parse_header(const std::string& line, std::size_t line_no) {
    std::istringstream in(line);
    std::string hash, nr_field, nt_field;
    in >> hash >> nr_field >> nt_field;
    if (hash != "#" || nr_field.rfind("nr=", 0) != 0 || nt_field.rfind("nt=", 0) != 0 ||
        !(in >> std::ws).eof()) {
        throw ParseError("expected shape header '# nr=<R> nt=<T>'", line_no);
    }
    const std::uint64_t nr = parse_unsigned(nr_field.substr(3), line_no, "nr");
    const std::uint64_t nt = parse_unsigned(nt_field.substr(3), line_no, "nt");
    if (nr == 0 || nt == 0) {
        throw ParseError("shape header dimensions must be positive", line_no);
    }
    return {static_cast<std::size_t>(nr), static_cast<std::size_t>(nt)};
}

std::string format_complex(const Complex& v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g%+.17gi", v.real(), v.imag());
    return buf;
}

}  // namespace

std::vector<CsiRecord> ingest_csi(std::istream& in) {
    std::vector<CsiRecord> records;
    std::string line;
    std::size_t line_no = 0;
    bool have_shape = false;
    std::size_t nr = 0;
    std::size_t nt = 0;

    while (std::getline(in, line)) {
        ++line_no;
        const std::string body = trimmed(line);
        if (body.empty()) {
            continue;
        }
        if (!have_shape) {
            std::tie(nr, nt) = parse_header(body, line_no);
            have_shape = true;
            continue;
        }

        const std::vector<std::string> fields = split_fields(body);
        const std::size_t expected = 1 + nr * nt + 1;
        if (fields.size() != expected) {
            throw ParseError("expected " + std::to_string(expected) + " fields, got " +
                                 std::to_string(fields.size()),
                             line_no);
        }
        const std::uint64_t subcarrier = parse_unsigned(fields[0], line_no, "subcarrier index");
        std::vector<Complex> entries;
        entries.reserve(nr * nt);
        for (std::size_t i = 0; i < nr * nt; ++i) {
            entries.push_back(parse_complex(fields[1 + i], line_no));
        }
        if (fields.back().empty()) {
            throw ParseError("missing timestamp", line_no);
        }
        records.push_back(CsiRecord{static_cast<std::uint32_t>(subcarrier),
                                    ComplexMatrix(nr, nt, std::move(entries)), fields.back()});
    }
    return records;
}

std::vector<CsiRecord> ingest_csi(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open CSI capture '" + path + "'");
    }
    return ingest_csi(in);
}

void write_csi(std::ostream& out, const std::vector<CsiRecord>& records) {
    if (records.empty()) {
        return;
    }
    const std::size_t nr = records.front().entries.rows();
    const std::size_t nt = records.front().entries.cols();
    out << "# nr=" << nr << " nt=" << nt << "\n";
    for (const CsiRecord& rec : records) {
        if (rec.entries.rows() != nr || rec.entries.cols() != nt) {
            throw ValidationError("all CSI records in one capture must share a shape");
        }
        if (rec.timestamp.empty() || rec.timestamp.find(',') != std::string::npos) {
            throw ValidationError("CSI timestamps must be non-empty and comma-free");
        }
        out << rec.subcarrier;
        for (const Complex& v : rec.entries.entries()) {
            out << ',' << format_complex(v);
        }
        out << ',' << rec.timestamp << "\n";
    }
}

void write_csi(const std::string& path, const std::vector<CsiRecord>& records) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot write CSI capture '" + path + "'");
    }
    write_csi(out, records);
    if (!out) {
        throw IoError("failed while writing CSI capture '" + path + "'");
    }
}

}  // namespace risim::bench
