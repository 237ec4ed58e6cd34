#include <fstream>
#include <map>
#include <string>

#include "rpfm/errors.hpp"
#include "rpfm/matrix_market.hpp"
#include "rpfm/problem.hpp"

namespace rpfm {

namespace fs = std::filesystem;

void save_bundle(const LcpProblem& p, const fs::path& dir) {
    p.validate();
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create '" + dir.string() + "': " + ec.message());

    save_matrix_market(p.m, dir / "M.mtx");
    save_vector(p.q, dir / "q.mtx");
    if (p.designed_solution) {
        save_vector(p.designed_solution->x, dir / "xstar.mtx");
        save_vector(p.designed_solution->y, dir / "ystar.mtx");
    } else {
        fs::remove(dir / "xstar.mtx", ec);
        fs::remove(dir / "ystar.mtx", ec);
    }

    std::ofstream meta(dir / "meta.txt");
    if (!meta) throw IoError("cannot write meta.txt in '" + dir.string() + "'");
    meta << "name=" << p.name << '\n' << "n=" << p.size() << '\n' << "seed=" << p.seed << '\n';
}

LcpProblem load_bundle(const fs::path& dir) {
    if (!fs::is_directory(dir)) throw IoError("problem bundle '" + dir.string() + "' not found");

    LcpProblem p;
    p.m = load_matrix_market(dir / "M.mtx");
    p.q = load_vector(dir / "q.mtx");
    p.name = dir.filename().string();

    const bool has_x = fs::exists(dir / "xstar.mtx");
    const bool has_y = fs::exists(dir / "ystar.mtx");
    if (has_x != has_y) throw IoError("bundle '" + dir.string() + "' has only one of xstar/ystar");
    if (has_x) p.designed_solution = ComplementaryPair{load_vector(dir / "xstar.mtx"), load_vector(dir / "ystar.mtx")};

    if (std::ifstream meta(dir / "meta.txt"); meta) {
        std::map<std::string, std::string> kv;
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(meta, line)) {
            ++line_no;
            if (line.empty() || line[0] == '#') continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos) throw ParseError((dir / "meta.txt").string(), line_no, "expected key=value");
            kv[line.substr(0, eq)] = line.substr(eq + 1);
        }
        if (auto it = kv.find("name"); it != kv.end() && !it->second.empty()) p.name = it->second;
        try {
            if (auto it = kv.find("seed"); it != kv.end()) p.seed = std::stoull(it->second);
            if (auto it = kv.find("n"); it != kv.end() && std::stoull(it->second) != p.size()) {
                throw DimensionMismatch("meta.txt n=" + it->second + " disagrees with q length " +
                                        std::to_string(p.size()));
            }
        } catch (const std::logic_error&) {
            throw ParseError((dir / "meta.txt").string(), 0, "bad numeric value");
        }
    }
    p.validate();
    return p;
}

}  // namespace rpfm
