#include "gdifs/toml_lite.hpp"

#include <cctype>
#include <cstdlib>
#include <sstream>
#include <vector>

#include "gdifs/errors.hpp"

namespace gdifs {

namespace {

using json = nlohmann::ordered_json;

[[noreturn]] void fail(std::size_t line, const std::string& what) {
    std::ostringstream os;
    os << "toml: line " << line << ": " << what;
    throw ValidationError(os.str());
}

void skip_ws(const std::string& s, std::size_t& pos) {
    while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
}

bool bare_key_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
}

std::string parse_basic_string(const std::string& s, std::size_t& pos, std::size_t line) {
    if (pos >= s.size() || s[pos] != '"') fail(line, "expected opening quote");
    ++pos;
    std::string out;
    while (pos < s.size() && s[pos] != '"') {
        char c = s[pos];
        if (c == '\\') {
            ++pos;
            if (pos >= s.size()) fail(line, "unterminated escape in string");
            switch (s[pos]) {
                case '"': out += '"'; break;
                case '\\': out += '\\'; break;
                case 'n': out += '\n'; break;
                case 't': out += '\t'; break;
                default: fail(line, "unsupported escape in string");
            }
            ++pos;
        } else {
            out += c;
            ++pos;
        }
    }
    if (pos >= s.size()) fail(line, "unterminated string");
    ++pos; // closing quote
    return out;
}

json parse_value(const std::string& s, std::size_t& pos, std::size_t line);

json parse_array(const std::string& s, std::size_t& pos, std::size_t line) {
    ++pos; // consume '['
    json arr = json::array();
    skip_ws(s, pos);
    if (pos < s.size() && s[pos] == ']') {
        ++pos;
        return arr;
    }
    while (true) {
        skip_ws(s, pos);
        arr.push_back(parse_value(s, pos, line));
        skip_ws(s, pos);
        if (pos >= s.size()) fail(line, "unterminated array (arrays must fit on one line)");
        if (s[pos] == ',') {
            ++pos;
            continue;
        }
        if (s[pos] == ']') {
            ++pos;
            return arr;
        }
        fail(line, "expected ',' or ']' in array");
    }
}

json parse_value(const std::string& s, std::size_t& pos, std::size_t line) {
    skip_ws(s, pos);
    if (pos >= s.size()) fail(line, "missing value");
    char c = s[pos];
    if (c == '"') return json(parse_basic_string(s, pos, line));
    if (c == '[') return parse_array(s, pos, line);
    if (s.compare(pos, 4, "true") == 0 && (pos + 4 == s.size() || !bare_key_char(s[pos + 4]))) {
        pos += 4;
        return json(true);
    }
    if (s.compare(pos, 5, "false") == 0 && (pos + 5 == s.size() || !bare_key_char(s[pos + 5]))) {
        pos += 5;
        return json(false);
    }
    // Number: integer or float.
    std::size_t start = pos;
    if (c == '+' || c == '-') ++pos;
    bool is_float = false;
    while (pos < s.size()) {
        char d = s[pos];
        if (std::isdigit(static_cast<unsigned char>(d))) {
            ++pos;
        } else if (d == '.' || d == 'e' || d == 'E') {
            is_float = true;
            ++pos;
            if (pos < s.size() && (s[pos] == '+' || s[pos] == '-') && (d == 'e' || d == 'E')) ++pos;
        } else {
            break;
        }
    }
    std::string tok = s.substr(start, pos - start);
    if (tok.empty() || tok == "+" || tok == "-") fail(line, "unrecognized value");
    if (is_float) {
        return json(std::strtod(tok.c_str(), nullptr));
    }
    try {
        return json(static_cast<std::int64_t>(std::stoll(tok)));
    } catch (const std::exception&) {
        fail(line, "integer out of range");
    }
}

std::string parse_key(const std::string& s, std::size_t& pos, std::size_t line) {
    skip_ws(s, pos);
    if (pos < s.size() && s[pos] == '"') return parse_basic_string(s, pos, line);
    std::size_t start = pos;
    while (pos < s.size() && bare_key_char(s[pos])) ++pos;
    if (pos == start) fail(line, "expected key");
    return s.substr(start, pos - start);
}

// Strip a trailing comment, ignoring '#' characters inside quoted strings.
std::string strip_comment(const std::string& s) {
    bool in_string = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        char c = s[i];
        if (in_string) {
            if (c == '\\') {
                ++i;
            } else if (c == '"') {
                in_string = false;
            }
        } else if (c == '"') {
            in_string = true;
        } else if (c == '#') {
            return s.substr(0, i);
        }
    }
    return s;
}

std::string trim(const std::string& s) {
    std::size_t a = 0;
    std::size_t b = s.size();
    while (a < b && (s[a] == ' ' || s[a] == '\t' || s[a] == '\r')) ++a;
    while (b > a && (s[b - 1] == ' ' || s[b - 1] == '\t' || s[b - 1] == '\r')) --b;
    return s.substr(a, b - a);
}

} // namespace

nlohmann::ordered_json parse_toml_lite(const std::string& text) {
    json root = json::object();
    json* current = &root;

    std::istringstream in(text);
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = trim(strip_comment(raw));
        if (line.empty()) continue;

        if (line.size() >= 4 && line[0] == '[' && line[1] == '[') {
            if (line.substr(line.size() - 2) != "]]") fail(line_no, "malformed [[table]] header");
            std::string name = trim(line.substr(2, line.size() - 4));
            if (name.empty()) fail(line_no, "empty [[table]] name");
            json& slot = root[name];
            if (slot.is_null()) slot = json::array();
            if (!slot.is_array()) fail(line_no, "'" + name + "' already used as a non-array");
            slot.push_back(json::object());
            current = &slot.back();
            continue;
        }
        if (line.front() == '[') {
            if (line.back() != ']') fail(line_no, "malformed [table] header");
            std::string name = trim(line.substr(1, line.size() - 2));
            if (name.empty()) fail(line_no, "empty [table] name");
            json& slot = root[name];
            if (slot.is_null()) slot = json::object();
            if (!slot.is_object()) fail(line_no, "'" + name + "' already used as a non-table");
            current = &slot;
            continue;
        }

        std::size_t pos = 0;
        std::string key = parse_key(line, pos, line_no);
        skip_ws(line, pos);
        if (pos >= line.size() || line[pos] != '=') fail(line_no, "expected '=' after key '" + key + "'");
        ++pos;
        json value = parse_value(line, pos, line_no);
        skip_ws(line, pos);
        if (pos != line.size()) fail(line_no, "trailing characters after value");
        if (current->contains(key)) fail(line_no, "duplicate key '" + key + "'");
        (*current)[key] = std::move(value);
    }
    return root;
}

} // namespace gdifs
