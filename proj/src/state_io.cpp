#include "carlock/state_io.hpp"

#include "carlock/error.hpp"

#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace carlock {

using nlohmann::json;

StateVector load_state(std::istream& in) {
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& ex) {
        throw StateFileError(std::string("invalid state file JSON: ") + ex.what());
    }
    if (!doc.is_object() || !doc.contains("n_modes") || !doc["n_modes"].is_number_integer())
        throw StateFileError("state file must be an object with integer \"n_modes\"");
    const int n_modes = doc["n_modes"].get<int>();
    if (n_modes < 1 || n_modes > kMaxModes)
        throw StateFileError("n_modes out of range [1, " + std::to_string(kMaxModes) + "]");
    StateVector psi;
    psi.n_modes = n_modes;
    psi.amplitudes = Eigen::VectorXcd::Zero(Eigen::Index{1} << n_modes);

    if (!doc.contains("amplitudes") || !doc["amplitudes"].is_array())
        throw StateFileError("state file must contain an \"amplitudes\" array");
    std::set<std::string> seen;
    for (const json& entry : doc["amplitudes"]) {
        if (!entry.is_object() || !entry.contains("basis") || !entry["basis"].is_string())
            throw StateFileError("each amplitude entry needs a \"basis\" string");
        const auto bits = entry["basis"].get<std::string>();
        if (static_cast<int>(bits.size()) != n_modes)
            throw StateFileError("basis string '" + bits + "' must have length " +
                                 std::to_string(n_modes));
        if (!seen.insert(bits).second)
            throw StateFileError("duplicate basis string '" + bits + "'");
        double re = 0.0, im = 0.0;
        if (entry.contains("re")) {
            if (!entry["re"].is_number()) throw StateFileError("\"re\" must be a number");
            re = entry["re"].get<double>();
        }
        if (entry.contains("im")) {
            if (!entry["im"].is_number()) throw StateFileError("\"im\" must be a number");
            im = entry["im"].get<double>();
        }
        FockBasisState basis;
        try {
            basis = FockBasisState::from_bits(bits);
        } catch (const Error& ex) {
            throw StateFileError(ex.what());
        }
        psi.amplitudes[basis.index()] = cplx{re, im};
    }
    const double norm = psi.amplitudes.norm();
    if (norm < 1e-12) throw StateFileError("state norm below 1e-12; cannot normalize");
    psi.amplitudes /= norm;
    return psi;
}

StateVector load_state_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw StateFileError("cannot open state file: " + path);
    return load_state(in);
}

std::string save_state(const StateVector& psi) {
    json amps = json::array();
    for (Eigen::Index b = 0; b < psi.dim(); ++b) {
        const cplx a = psi.amplitudes[b];
        if (std::abs(a) <= 1e-14) continue;
        amps.push_back({{"basis", FockBasisState::from_index(b, psi.n_modes).bits()},
                        {"re", a.real()},
                        {"im", a.imag()}});
    }
    json doc = {{"n_modes", psi.n_modes}, {"amplitudes", amps}};
    return doc.dump(2);
}

void save_state_file(const StateVector& psi, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw StateFileError("cannot open output file: " + path);
    out << save_state(psi) << '\n';
}

} // namespace carlock
