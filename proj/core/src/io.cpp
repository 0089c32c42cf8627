#include "rlink/io.hpp"

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "rlink/errors.hpp"

namespace rlink {

namespace {

using nlohmann::json;

json parse_document(const std::string& text) {
    json doc = json::parse(text, /*cb=*/nullptr, /*allow_exceptions=*/false);
    if (doc.is_discarded()) throw InputError("document is not valid JSON");
    if (!doc.is_object()) throw InputError("document root must be a JSON object");
    return doc;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

double number_or_rational(const json& v, const std::string& field) {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) return parse_rational(v.get<std::string>(), field);
    throw InputError(field + ": expected a number or a \"p/q\" rational string");
}

std::string field_string(const json& doc, const char* key) {
    auto it = doc.find(key);
    if (it == doc.end()) throw InputError(std::string(key) + ": missing");
    if (!it->is_string()) throw InputError(std::string(key) + ": expected a string");
    return it->get<std::string>();
}

int field_degree(const json& doc) {
    auto it = doc.find("degree");
    if (it == doc.end()) throw InputError("degree: missing");
    if (!it->is_number_integer()) throw InputError("degree: expected an integer");
    int d = it->get<int>();
    if (d < 1) throw InputError("degree: must be >= 1");
    return d;
}

int field_orientation(const json& doc) {
    auto it = doc.find("orientation");
    if (it == doc.end()) throw InputError("orientation: missing");
    if (!it->is_number_integer()) throw InputError("orientation: expected 1 or -1");
    int o = it->get<int>();
    if (o != 1 && o != -1) throw InputError("orientation: expected 1 or -1");
    return o;
}

const json& field_rows(const json& doc, const char* key) {
    auto it = doc.find(key);
    if (it == doc.end()) throw InputError(std::string(key) + ": missing");
    if (!it->is_array() || it->size() != 4)
        throw InputError(std::string(key) + ": expected an array of 4 coordinate rows");
    return *it;
}

}  // namespace

double parse_rational(const std::string& text, const std::string& field) {
    const auto slash = text.find('/');
    const char* s = text.c_str();
    char* end = nullptr;
    if (slash == std::string::npos) {
        double v = std::strtod(s, &end);
        if (end == s || *end != '\0')
            throw InputError(field + ": cannot parse number \"" + text + "\"");
        return v;
    }
    errno = 0;
    long long p = std::strtoll(s, &end, 10);
    if (end != s + slash || errno == ERANGE)
        throw InputError(field + ": cannot parse rational \"" + text + "\"");
    const char* qs = s + slash + 1;
    long long q = std::strtoll(qs, &end, 10);
    if (end == qs || *end != '\0' || errno == ERANGE)
        throw InputError(field + ": cannot parse rational \"" + text + "\"");
    if (q == 0) throw InputError(field + ": rational \"" + text + "\" has zero denominator");
    return static_cast<double>(p) / static_cast<double>(q);
}

ParamSpaceCurve curve_from_json_text(const std::string& text) {
    json doc = parse_document(text);
    std::string label = field_string(doc, "label");
    int d = field_degree(doc);
    int orientation = field_orientation(doc);
    const json& rows = field_rows(doc, "coeffs");

    std::vector<BinaryForm> forms;
    forms.reserve(4);
    for (size_t r = 0; r < 4; ++r) {
        std::string field = "coeffs[" + std::to_string(r) + "]";
        const json& row = rows[r];
        if (!row.is_array() || static_cast<int>(row.size()) != d + 1)
            throw InputError(field + ": expected " + std::to_string(d + 1) + " coefficients");
        std::vector<double> c;
        c.reserve(row.size());
        for (size_t j = 0; j < row.size(); ++j)
            c.push_back(number_or_rational(row[j], field + "[" + std::to_string(j) + "]"));
        forms.emplace_back(std::move(c));
    }
    return {RowCurve{std::move(forms), d}, orientation, std::move(label)};
}

ParamSpaceCurve load_curve_file(const std::string& path) {
    return curve_from_json_text(read_file(path));
}

FamilySpec family_from_json_text(const std::string& text) {
    json doc = parse_document(text);
    FamilySpec f;
    f.label = field_string(doc, "label");
    f.degree = field_degree(doc);
    f.orientation = field_orientation(doc);

    const json& rows = field_rows(doc, "lambda_coeffs");
    f.entry_poly.clear();
    for (size_t r = 0; r < 4; ++r) {
        std::string field = "lambda_coeffs[" + std::to_string(r) + "]";
        const json& row = rows[r];
        if (!row.is_array() || static_cast<int>(row.size()) != f.degree + 1)
            throw InputError(field + ": expected " + std::to_string(f.degree + 1) + " entries");
        std::vector<std::vector<double>> entries;
        for (size_t j = 0; j < row.size(); ++j) {
            std::string efield = field + "[" + std::to_string(j) + "]";
            const json& entry = row[j];
            if (!entry.is_array() || entry.empty())
                throw InputError(efield + ": expected a non-empty array of lambda coefficients");
            std::vector<double> cp;
            for (size_t k = 0; k < entry.size(); ++k)
                cp.push_back(number_or_rational(entry[k], efield + "[" + std::to_string(k) + "]"));
            entries.push_back(std::move(cp));
        }
        f.entry_poly.push_back(std::move(entries));
    }

    auto it = doc.find("range");
    if (it == doc.end()) throw InputError("range: missing");
    if (!it->is_array() || it->size() != 2 || !(*it)[0].is_number() || !(*it)[1].is_number())
        throw InputError("range: expected [lo, hi]");
    f.lo = (*it)[0].get<double>();
    f.hi = (*it)[1].get<double>();
    if (!(f.lo < f.hi)) throw InputError("range: lo must be less than hi");
    return f;
}

FamilySpec load_family_file(const std::string& path) {
    return family_from_json_text(read_file(path));
}

}  // namespace rlink
