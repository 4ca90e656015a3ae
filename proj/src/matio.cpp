#include "slnz/matio.hpp"

#include <fstream>
#include <sstream>

namespace slnz {

IntMat parse_matrix_text(std::istream& in) {
    std::string line;
    long lineno = 0;
    auto next_line = [&]() {
        while (std::getline(in, line)) {
            ++lineno;
            if (line.find_first_not_of(" \t\r\n") != std::string::npos) return true;
        }
        return false;
    };
    if (!next_line()) throw ParseError("line 1: missing header \"rows cols\"");
    int rows = 0, cols = 0;
    {
        std::istringstream hs(line);
        std::string extra;
        if (!(hs >> rows >> cols) || rows < 0 || cols < 0 || (hs >> extra))
            throw ParseError("line " + std::to_string(lineno) + ": malformed header \"" + line + "\"");
    }
    IntMat m(rows, cols);
    for (int i = 0; i < rows; ++i) {
        if (!next_line())
            throw ParseError("line " + std::to_string(lineno + 1) + ": expected row " +
                             std::to_string(i + 1) + " of " + std::to_string(rows));
        std::istringstream rs(line);
        std::string tok;
        for (int j = 0; j < cols; ++j) {
            if (!(rs >> tok))
                throw ParseError("line " + std::to_string(lineno) + ": row has fewer than " +
                                 std::to_string(cols) + " entries");
            if (mpz_set_str(m.at(i, j).get_mpz_t(), tok.c_str(), 10) != 0)
                throw ParseError("line " + std::to_string(lineno) + ": bad integer \"" + tok + "\"");
        }
        std::string extra;
        if (rs >> extra)
            throw ParseError("line " + std::to_string(lineno) + ": trailing token \"" + extra + "\"");
    }
    return m;
}

IntMat read_matrix_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ParseError("cannot open matrix file: " + path);
    return parse_matrix_text(f);
}

} // namespace slnz
