#include "cq/system_io.hpp"

#include <fstream>
#include <sstream>

namespace cq {

namespace {

std::string strip(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

} // namespace

SystemFile parse_system_text(const std::string& content) {
    SystemFile sf;
    std::istringstream in(content);
    std::string raw;
    int lineno = 0;
    int section = 0; // 0 headers, 1 cubic, 2 quadratic
    bool seen_p = false, seen_n = false;

    while (std::getline(in, raw)) {
        lineno++;
        std::string line = raw;
        if (auto pos = line.find('#'); pos != std::string::npos) line = line.substr(0, pos);
        line = strip(line);
        if (line.empty()) continue;

        if (line == "cubic:") {
            if (!seen_p || !seen_n) throw ParseError(lineno, "headers p and n must precede sections");
            section = 1;
            continue;
        }
        if (line == "quadratic:") {
            if (!seen_p || !seen_n) throw ParseError(lineno, "headers p and n must precede sections");
            section = 2;
            continue;
        }

        if (section == 0) {
            auto eq = line.find('=');
            if (eq == std::string::npos) throw ParseError(lineno, "expected 'key = value'");
            std::string key = strip(line.substr(0, eq));
            std::string val = strip(line.substr(eq + 1));
            try {
                if (key == "p") {
                    sf.p = std::stoll(val);
                    seen_p = true;
                } else if (key == "k") {
                    sf.k = std::stoi(val);
                } else if (key == "n") {
                    sf.n = std::stoi(val);
                    seen_n = true;
                } else if (key == "N") {
                    sf.N = std::stoi(val);
                } else if (key == "seed") {
                    sf.seed = std::stoull(val);
                } else if (key == "modulus") {
                    std::vector<int64_t> m;
                    std::istringstream ms(val);
                    std::string tok;
                    while (std::getline(ms, tok, ',')) m.push_back(std::stoll(strip(tok)));
                    sf.modulus = std::move(m);
                } else {
                    throw ParseError(lineno, "unknown header key '" + key + "'");
                }
            } catch (const ParseError&) {
                throw;
            } catch (const std::exception&) {
                throw ParseError(lineno, "bad value for header '" + key + "'");
            }
            continue;
        }

        auto colon = line.rfind(':');
        if (colon == std::string::npos) throw ParseError(lineno, "monomial line needs 'e1 ... en : c'");
        std::istringstream es(line.substr(0, colon));
        std::vector<int> exps;
        int e;
        while (es >> e) exps.push_back(e);
        if (static_cast<int>(exps.size()) != sf.n)
            throw ParseError(lineno, "expected " + std::to_string(sf.n) + " exponents, got " +
                                         std::to_string(exps.size()));
        int total = 0;
        for (int x : exps) {
            if (x < 0) throw ParseError(lineno, "negative exponent");
            total += x;
        }
        int want = section == 1 ? 3 : 2;
        if (total != want)
            throw ParseError(lineno, "monomial degree " + std::to_string(total) + " in the " +
                                         (section == 1 ? "cubic" : "quadratic") + " section (want " +
                                         std::to_string(want) + ")");
        std::string cs = strip(line.substr(colon + 1));
        if (cs.empty()) throw ParseError(lineno, "missing coefficient");
        mpz_class c;
        if (mpz_set_str(c.get_mpz_t(), cs.c_str(), 10) != 0)
            throw ParseError(lineno, "bad coefficient '" + cs + "'");
        (section == 1 ? sf.cubic : sf.quadratic).push_back({std::move(exps), std::move(c)});
    }

    if (!seen_p || !seen_n) throw ParseError(lineno, "missing required headers (p, n)");
    if (sf.n < 1 || sf.n > kMaxVars) throw ParseError(lineno, "n out of range");
    if (sf.N < 1) throw ParseError(lineno, "N must be >= 1");
    if (sf.k < 1) throw ParseError(lineno, "k must be >= 1");
    return sf;
}

SystemFile load_system_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(0, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_system_text(ss.str());
}

std::string serialize_system(const SystemFile& sf) {
    std::ostringstream os;
    os << "p = " << sf.p << "\n";
    os << "k = " << sf.k << "\n";
    os << "n = " << sf.n << "\n";
    os << "N = " << sf.N << "\n";
    os << "seed = " << sf.seed << "\n";
    if (sf.modulus) {
        os << "modulus = ";
        for (size_t i = 0; i < sf.modulus->size(); i++) os << (i ? "," : "") << (*sf.modulus)[i];
        os << "\n";
    }
    auto dump = [&](const char* name, const std::vector<std::pair<std::vector<int>, mpz_class>>& v) {
        os << name << ":\n";
        for (auto& [e, c] : v) {
            for (size_t i = 0; i < e.size(); i++) os << (i ? " " : "") << e[i];
            os << " : " << c.get_str() << "\n";
        }
    };
    dump("cubic", sf.cubic);
    dump("quadratic", sf.quadratic);
    return os.str();
}

PadicSystem build_system(const SystemFile& sf, std::optional<int> precision_override) {
    Field F = FqField::make(sf.p, sf.k, sf.modulus);
    int N = precision_override.value_or(sf.N);
    Ring R = PadicRing::make(F, N);
    Polynomial<PadicInt> cubic(R, sf.n), quad(R, sf.n);
    auto add = [&](Polynomial<PadicInt>& poly, const std::vector<int>& e, const mpz_class& c) {
        Mono m(sf.n);
        for (int i = 0; i < sf.n; i++) m[i] = static_cast<uint8_t>(e[i]);
        poly.add_term(m, PadicInt::from_int(R, c));
    };
    for (auto& [e, c] : sf.cubic) add(cubic, e, c);
    for (auto& [e, c] : sf.quadratic) add(quad, e, c);
    return PadicSystem::make(R, std::move(cubic), std::move(quad));
}

} // namespace cq
