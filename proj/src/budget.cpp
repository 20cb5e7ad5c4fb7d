#include "ualgeo/budget.hpp"

#include <cstdlib>
#include <sstream>

#include "ualgeo/error.hpp"

namespace ualgeo {
namespace {

std::size_t parse_count(const std::string& text) {
    std::size_t pos = 0;
    unsigned long long value = 0;
    try {
        value = std::stoull(text, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos == 0 || pos != text.size())
        throw Error(ErrorKind::Parse, "budget value is not a non-negative integer: '" + text + "'");
    return static_cast<std::size_t>(value);
}

}  // namespace

Budget Budget::parse(const std::string& text, Budget base) {
    if (text.find('=') == std::string::npos) {
        base.max_free_elements = parse_count(text);
        return base;
    }
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw Error(ErrorKind::Parse, "budget entry without '=': '" + item + "'");
        const std::string key = item.substr(0, eq);
        const std::size_t value = parse_count(item.substr(eq + 1));
        if (key == "free") base.max_free_elements = value;
        else if (key == "n") base.max_arity = static_cast<unsigned>(value);
        else if (key == "lattice") base.max_lattice = value;
        else if (key == "points") base.max_points = value;
        else if (key == "universe") base.max_universe = value;
        else if (key == "subsets") base.max_subset_equations = value;
        else throw Error(ErrorKind::Parse, "unknown budget key '" + key + "'");
    }
    return base;
}

Budget Budget::parse(const std::string& text) { return parse(text, Budget{}); }

Budget Budget::from_environment() {
    if (const char* env = std::getenv("UALGEO_BUDGET"); env && *env) return parse(env);
    return {};
}

}  // namespace ualgeo
