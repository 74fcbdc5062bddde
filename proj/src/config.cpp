#include "ecodrive/config.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "ecodrive/errors.hpp"

namespace ecodrive {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) out.push_back(trim(item));
    if (!s.empty() && s.back() == sep) out.emplace_back();
    return out;
}

} // namespace

double parse_double(const std::string& text) {
    const std::string t = trim(text);
    double value = 0;
    const char* first = t.data();
    const char* last = t.data() + t.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last)
        throw ValidationError("not a number: '" + t + "'");
    return value;
}

std::string format_double(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    (void)ec;
    return std::string(buf, ptr);
}

KvFile KvFile::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open '" + path + "'");
    std::ostringstream all;
    all << in.rdbuf();
    return parse_text(all.str(), path);
}

KvFile KvFile::parse_text(const std::string& text, const std::string& label) {
    KvFile kv;
    kv.label_ = label;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ValidationError(label + ":" + std::to_string(lineno) +
                                  ": expected 'key = value'");
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (key.empty())
            throw ValidationError(label + ":" + std::to_string(lineno) +
                                  ": empty key");
        if (kv.values_.count(key))
            throw ValidationError(label + ":" + std::to_string(lineno) +
                                  ": duplicate key '" + key + "'");
        kv.values_[key] = value;
        kv.read_[key] = false;
    }
    return kv;
}

bool KvFile::has(const std::string& key) const { return values_.count(key) != 0; }

void KvFile::fail(const std::string& key, const std::string& what) const {
    throw ValidationError(label_ + ": key '" + key + "': " + what);
}

const std::string& KvFile::raw(const std::string& key) {
    auto it = values_.find(key);
    if (it == values_.end()) fail(key, "missing");
    read_[key] = true;
    return it->second;
}

std::string KvFile::get_string(const std::string& key) { return raw(key); }

std::string KvFile::get_string(const std::string& key, const std::string& fallback) {
    return has(key) ? raw(key) : fallback;
}

double KvFile::get_double(const std::string& key) {
    try {
        return parse_double(raw(key));
    } catch (const ValidationError& e) {
        fail(key, e.what());
    }
}

double KvFile::get_double(const std::string& key, double fallback) {
    return has(key) ? get_double(key) : fallback;
}

int KvFile::get_int(const std::string& key) {
    const double d = get_double(key);
    const int i = static_cast<int>(d);
    if (static_cast<double>(i) != d) fail(key, "expected an integer");
    return i;
}

int KvFile::get_int(const std::string& key, int fallback) {
    return has(key) ? get_int(key) : fallback;
}

std::vector<double> KvFile::get_list(const std::string& key) {
    const std::string& v = raw(key);
    std::vector<double> out;
    for (const std::string& item : split(v, ',')) {
        try {
            out.push_back(parse_double(item));
        } catch (const ValidationError& e) {
            fail(key, e.what());
        }
    }
    if (out.empty()) fail(key, "empty list");
    return out;
}

std::vector<std::pair<double, double>> KvFile::get_pairs(const std::string& key) {
    const std::string& v = raw(key);
    std::vector<std::pair<double, double>> out;
    for (const std::string& item : split(v, ',')) {
        const auto colon = item.find(':');
        if (colon == std::string::npos) fail(key, "expected 'x:y' pairs");
        try {
            out.emplace_back(parse_double(item.substr(0, colon)),
                             parse_double(item.substr(colon + 1)));
        } catch (const ValidationError& e) {
            fail(key, e.what());
        }
    }
    if (out.empty()) fail(key, "empty pair list");
    return out;
}

std::vector<std::string> KvFile::unread_keys() const {
    std::vector<std::string> out;
    for (const auto& [key, was_read] : read_)
        if (!was_read) out.push_back(key);
    return out;
}

} // namespace ecodrive
