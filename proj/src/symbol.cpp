#include "symrec/symbol.hpp"

#include "symrec/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace symrec {

namespace {

std::vector<std::string_view> split_whitespace(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        std::size_t j = i;
        while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
        if (j > i) out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

double parse_number(std::string_view tok, std::size_t line_no) {
    double v = 0.0;
    if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size())
        throw ParseError(line_no, "not a number: '" + std::string(tok) + "'");
    if (!std::isfinite(v)) throw ParseError(line_no, "non-finite value: '" + std::string(tok) + "'");
    return v;
}

template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
    std::size_t line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const std::size_t nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        fn(line, line_no);
        if (nl == std::string_view::npos) break;
        text.remove_prefix(nl + 1);
    }
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path.string());
    out << text;
}

}  // namespace

void validate_symbol(const Symbol& s) {
    if (s.primitives.empty()) throw InputError("symbol has no primitives");
    for (std::size_t i = 0; i < s.primitives.size(); ++i) {
        const auto& p = s.primitives[i];
        if (!p.axis_start.allFinite() || !p.axis_end.allFinite() || !std::isfinite(p.thickness))
            throw InputError("primitive " + std::to_string(i) + " has non-finite coordinates");
        if (p.axis_start == p.axis_end) throw InputError("primitive " + std::to_string(i) + " has zero-length axis");
        if (p.thickness < 0) throw InputError("primitive " + std::to_string(i) + " has negative thickness");
    }
}

Symbol parse_symbol(std::string_view text) {
    Symbol s;
    for_each_line(text, [&](std::string_view raw, std::size_t line_no) {
        const std::string_view line = trim(raw);
        if (line.empty()) return;
        if (line.front() == '#') {
            constexpr std::string_view tag = "# label ";
            if (line.starts_with(tag)) s.label = std::string(trim(line.substr(tag.size())));
            return;
        }
        const auto tok = split_whitespace(line);
        if (tok.size() != 6)
            throw ParseError(line_no, "expected 6 fields, got " + std::to_string(tok.size()));
        Primitive p;
        if (tok[0] == "V")
            p.kind = PrimitiveKind::Vector;
        else if (tok[0] == "Q")
            p.kind = PrimitiveKind::Quadrilateral;
        else
            throw ParseError(line_no, "unknown primitive kind '" + std::string(tok[0]) + "'");
        p.axis_start = {parse_number(tok[1], line_no), parse_number(tok[2], line_no)};
        p.axis_end = {parse_number(tok[3], line_no), parse_number(tok[4], line_no)};
        p.thickness = parse_number(tok[5], line_no);
        if (p.axis_start == p.axis_end) throw ParseError(line_no, "zero-length axis");
        if (p.thickness < 0) throw ParseError(line_no, "negative thickness");
        s.primitives.push_back(p);
    });
    if (s.primitives.empty()) throw ParseError(0, "symbol contains no primitives");
    return s;
}

std::string serialize_symbol(const Symbol& s) {
    std::ostringstream out;
    out.setf(std::ios::fixed);
    out.precision(6);
    if (s.label) out << "# label " << *s.label << '\n';
    for (const auto& p : s.primitives) {
        out << (p.kind == PrimitiveKind::Vector ? 'V' : 'Q') << ' ' << p.axis_start.x() << ' ' << p.axis_start.y()
            << ' ' << p.axis_end.x() << ' ' << p.axis_end.y() << ' ' << p.thickness << '\n';
    }
    return out.str();
}

Symbol read_symbol_file(const std::filesystem::path& path) {
    try {
        return parse_symbol(read_text(path));
    } catch (const ParseError& e) {
        throw InputError(path.string() + ": " + e.what());
    }
}

void write_symbol_file(const std::filesystem::path& path, const Symbol& s) { write_text(path, serialize_symbol(s)); }

std::vector<std::string> DatasetManifest::class_labels() const {
    std::set<std::string> labels;
    for (const auto& e : entries) labels.insert(e.label);
    return {labels.begin(), labels.end()};
}

DatasetManifest parse_manifest(std::string_view text, const std::filesystem::path& base_dir) {
    DatasetManifest m;
    std::set<std::filesystem::path> seen;
    for_each_line(text, [&](std::string_view raw, std::size_t line_no) {
        if (trim(raw).empty() || trim(raw).front() == '#') return;
        const std::size_t tab = raw.find('\t');
        if (tab == std::string_view::npos || raw.find('\t', tab + 1) != std::string_view::npos)
            throw ParseError(line_no, "expected two tab-separated columns");
        const std::string_view path = trim(raw.substr(0, tab));
        const std::string_view label = trim(raw.substr(tab + 1));
        if (path.empty() || label.empty()) throw ParseError(line_no, "empty path or class");
        std::filesystem::path p(path);
        if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
        p = p.lexically_normal();
        if (!seen.insert(p).second) throw ParseError(line_no, "duplicate path " + p.string());
        m.entries.push_back({p, std::string(label)});
    });
    return m;
}

DatasetManifest read_manifest(const std::filesystem::path& path) {
    try {
        return parse_manifest(read_text(path), path.parent_path());
    } catch (const ParseError& e) {
        throw InputError(path.string() + ": " + e.what());
    }
}

void write_manifest(const std::filesystem::path& path, const DatasetManifest& m) {
    std::ostringstream out;
    const auto base = path.parent_path();
    for (const auto& e : m.entries) {
        std::filesystem::path p = e.path;
        if (!base.empty() && p.is_absolute() == base.is_absolute()) {
            const auto rel = p.lexically_relative(base);
            if (!rel.empty()) p = rel;
        }
        out << p.generic_string() << '\t' << e.label << '\n';
    }
    write_text(path, out.str());
}

}  // namespace symrec
