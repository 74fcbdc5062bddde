#ifndef ECODRIVE_CONFIG_HPP
#define ECODRIVE_CONFIG_HPP

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace ecodrive {

/// Minimal `key = value` file reader. Lines starting with '#' and blank
/// lines are skipped. Values may be scalars, comma-separated lists, or
/// `x:y` pair lists. All getters throw ValidationError with the file and
/// key named; reads are tracked so unknown keys can be reported.
class KvFile {
public:
    static KvFile parse_file(const std::string& path);
    static KvFile parse_text(const std::string& text, const std::string& label);

    bool has(const std::string& key) const;

    std::string get_string(const std::string& key);
    std::string get_string(const std::string& key, const std::string& fallback);
    double get_double(const std::string& key);
    double get_double(const std::string& key, double fallback);
    int get_int(const std::string& key);
    int get_int(const std::string& key, int fallback);
    std::vector<double> get_list(const std::string& key);
    std::vector<std::pair<double, double>> get_pairs(const std::string& key);

    /// Keys present in the file but never read. Call after all gets.
    std::vector<std::string> unread_keys() const;
    const std::string& label() const { return label_; }

private:
    [[noreturn]] void fail(const std::string& key, const std::string& what) const;
    const std::string& raw(const std::string& key);

    std::string label_;
    std::map<std::string, std::string> values_;
    std::map<std::string, bool> read_;
};

/// Locale-independent double parsing/formatting helpers used by every
/// text format in the project (shortest round-trip representation).
double parse_double(const std::string& text); // throws ValidationError
std::string format_double(double value);

} // namespace ecodrive

#endif
