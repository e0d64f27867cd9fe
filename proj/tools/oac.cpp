// Command-line front end: encoding/decoding, coset listings, spectra,
// distance-spectrum tables, FER theory and simulation. All outputs are
// machine-readable (CSV or JSON).

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "oac/arith.hpp"
#include "oac/ccs.hpp"
#include "oac/coexist.hpp"
#include "oac/decoder.hpp"
#include "oac/hds.hpp"
#include "oac/sim.hpp"

using nlohmann::json;

#ifndef OAC_BUILD_HASH
#define OAC_BUILD_HASH "unknown"
#endif
static const char* kVersion = "0.1.0 (" OAC_BUILD_HASH ")";

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitComplexity = 3;

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

oac::BitVec read_bits_file(const std::string& path) {
    std::string raw = read_text_file(path);
    oac::BitVec bits;
    for (char c : raw) {
        if (c == '0' || c == '1') bits.push_back(static_cast<uint8_t>(c - '0'));
        else if (!std::isspace(static_cast<unsigned char>(c)))
            throw std::invalid_argument("bit file must contain only 0/1 and whitespace");
    }
    return bits;
}

void write_output(const std::string& out_path, const std::string& data) {
    if (out_path.empty()) {
        std::cout << data;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot open " + out_path);
    out << data;
}

oac::CodeConfig make_config(int n, const std::string& R, int t) {
    return oac::CodeConfig(n, oac::Rational::parse(R), t);
}

oac::StreamMode parse_mode(const std::string& s) {
    if (s == "prefix") return oac::StreamMode::Prefix;
    if (s == "halftail") return oac::StreamMode::HalfTail;
    throw std::invalid_argument("mode must be prefix or halftail");
}

oac::CcsScheme parse_scheme(const std::string& s) {
    if (s == "rounding") return oac::CcsScheme::Rounding;
    if (s == "linear") return oac::CcsScheme::Linear;
    if (s == "fine") return oac::CcsScheme::Fine;
    throw std::invalid_argument("scheme must be rounding, linear or fine");
}

// density value used by the binomial and fast distance-spectrum formulas
oac::Spectrum body_spectrum(const oac::CodeConfig& cfg, int bins = 1 << 14) {
    return oac::converged_ccs(cfg.r, bins, oac::CcsScheme::Fine);
}

std::vector<double> parse_eps_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
    return out;
}

oac::ExperimentConfig experiment_from_json(const json& j) {
    oac::ExperimentConfig e;
    e.cfg = make_config(j.at("n").get<int>(), j.at("R").get<std::string>(), j.value("t", 0));
    if (j.at("eps").is_array())
        e.eps_list = j.at("eps").get<std::vector<double>>();
    else
        e.eps_list = {j.at("eps").get<double>()};
    e.trials = j.value("trials", 10000ull);
    e.seed = j.value("seed", 1ull);
    e.dec.M = j.value("M", 1);
    e.dec.epsilon = e.eps_list.front();
    e.dec.use_ccs = j.value("use_ccs", false);
    std::string regime = j.value("regime", std::string("full"));
    if (regime == "full") e.regime = oac::Regime::Full;
    else if (regime == "known-prefix") {
        e.regime = oac::Regime::KnownPrefix;
        e.known_suffix = j.value("unknown", 1);
    } else throw std::invalid_argument("regime must be full or known-prefix");
    std::string algo = j.value("algo", std::string("m"));
    if (algo == "m") e.algo = oac::DecodeAlgo::MAlgorithm;
    else if (algo == "backward-replacing") e.algo = oac::DecodeAlgo::BackwardReplacing;
    else throw std::invalid_argument("algo must be m or backward-replacing");
    e.threads = j.value("threads", 0);
    return e;
}

json report_to_json(const oac::FerReport& rep, double eps_for_dec) {
    (void)eps_for_dec;
    json pts = json::array();
    for (const auto& p : rep.points) {
        pts.push_back({{"eps", p.eps},
                       {"errors", p.errors},
                       {"decode_failures", p.decode_failures},
                       {"trials", p.trials},
                       {"fer", p.fer},
                       {"wilson95", {p.ci.lo, p.ci.hi}}});
    }
    return {{"seed", rep.seed}, {"wall_seconds", rep.wall_seconds}, {"points", pts}};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"overlapped arithmetic codes toolkit"};
    app.set_version_flag("--version", std::string("oac ") + kVersion);
    app.require_subcommand(1);

    // ---- encode / decode -----------------------------------------------------
    std::string enc_p = "1/2", enc_mode = "prefix", enc_in, enc_out;
    int enc_w = 16;
    auto* enc = app.add_subcommand("encode", "arithmetic-encode a bit block");
    enc->add_option("--p", enc_p, "probability of a 1 bit, as a rational p/q")->capture_default_str();
    enc->add_option("--w", enc_w, "window width in bits (4..30)")->capture_default_str();
    enc->add_option("--mode", enc_mode, "prefix|halftail")->capture_default_str();
    enc->add_option("--in", enc_in, "input file of ASCII bits")->required();
    enc->add_option("--out", enc_out, "output bitstream file")->required();

    std::string dec_p = "1/2", dec_in, dec_out;
    int dec_n = 0;
    auto* decc = app.add_subcommand("decode", "arithmetic-decode a bitstream");
    decc->add_option("--p", dec_p, "probability of a 1 bit, as a rational p/q")->capture_default_str();
    decc->add_option("--n", dec_n, "number of symbols to decode")->required();
    decc->add_option("--in", dec_in, "input bitstream file")->required();
    decc->add_option("--out", dec_out, "output file (ASCII bits; stdout if omitted)");

    // ---- cosets ---------------------------------------------------------------
    int cos_n = 4, cos_t = 0;
    std::string cos_R = "1/2";
    int64_t cos_list = -1;
    auto* cos = app.add_subcommand("cosets", "coset sizes or members");
    cos->add_option("--n", cos_n, "block length")->required();
    cos->add_option("--R", cos_R, "average rate p/q")->required();
    cos->add_option("--t", cos_t, "tail length")->capture_default_str();
    cos->add_option("--list", cos_list, "list the members of this coset instead");

    // ---- ccs ------------------------------------------------------------------
    int ccs_n = 0, ccs_t = 0, ccs_bins = 1 << 16, ccs_level = 0;
    std::string ccs_R = "1/2", ccs_scheme = "fine", ccs_out;
    auto* ccs = app.add_subcommand("ccs", "coset cardinality spectrum at a level");
    ccs->add_option("--n", ccs_n, "block length")->required();
    ccs->add_option("--R", ccs_R, "average rate p/q")->required();
    ccs->add_option("--t", ccs_t, "tail length")->capture_default_str();
    ccs->add_option("--bins", ccs_bins, "number of bins")->capture_default_str();
    ccs->add_option("--scheme", ccs_scheme, "rounding|linear|fine")->capture_default_str();
    ccs->add_option("--level", ccs_level, "level i in [0,n]")->capture_default_str();
    ccs->add_option("--out", ccs_out, "CSV output file (stdout if omitted)");

    // ---- hds / psi3 -----------------------------------------------------------
    int hds_n = 0, hds_t = 0, hds_dmax = -1;
    std::string hds_R = "1/2", hds_method = "exhaustive", hds_out;
    auto* hds = app.add_subcommand("hds", "Hamming distance spectrum");
    hds->add_option("--n", hds_n, "block length")->required();
    hds->add_option("--R", hds_R, "average rate p/q")->required();
    hds->add_option("--t", hds_t, "tail length")->capture_default_str();
    hds->add_option("--method", hds_method, "exhaustive|th1|th2|th3|th4")->capture_default_str();
    hds->add_option("--dmax", hds_dmax, "largest distance to compute (th2/th3)");
    hds->add_option("--out", hds_out, "CSV output file (stdout if omitted)");

    double psi3_r = 0.5;
    int psi3_bound = 64;
    std::string psi3_out;
    auto* psi3 = app.add_subcommand("psi3", "detect linear growth of the distance-3 spectrum");
    psi3->add_option("--r", psi3_r, "body rate")->required();
    psi3->add_option("--bound", psi3_bound, "search bound on i+j")->capture_default_str();
    psi3->add_option("--out", psi3_out, "JSON output file (stdout if omitted)");

    // ---- fer-theory -----------------------------------------------------------
    std::string fert_R = "1/2", fert_eps = "0.01", fert_out;
    int fert_unknown = 1;
    auto* fert = app.add_subcommand("fer-theory", "closed-form FER, 1 or 2 unknown ending symbols");
    fert->add_option("--R", fert_R, "body rate p/q")->required();
    fert->add_option("--unknown", fert_unknown, "1 or 2 unknown ending symbols")->capture_default_str();
    fert->add_option("--eps-list", fert_eps, "comma-separated crossover probabilities")->required();
    fert->add_option("--out", fert_out, "CSV output file (stdout if omitted)");

    // ---- decode-sw ------------------------------------------------------------
    int dsw_n = 0, dsw_t = 0, dsw_M = 16;
    std::string dsw_R = "1/2", dsw_y, dsw_out;
    double dsw_eps = 0.05;
    bool dsw_ccs = false, dsw_backward = false;
    int64_t dsw_m = 0;
    auto* dsw = app.add_subcommand("decode-sw", "decode one block from its coset index and side information");
    dsw->add_option("--n", dsw_n, "block length")->required();
    dsw->add_option("--R", dsw_R, "average rate p/q")->required();
    dsw->add_option("--t", dsw_t, "tail length")->capture_default_str();
    dsw->add_option("--M", dsw_M, "beam width")->capture_default_str();
    dsw->add_option("--eps", dsw_eps, "crossover probability")->capture_default_str();
    dsw->add_flag("--use-ccs", dsw_ccs, "add the density term to the path metric");
    dsw->add_flag("--backward-replacing", dsw_backward, "memory-capped list algorithm");
    dsw->add_option("--m", dsw_m, "coset index")->required();
    dsw->add_option("--y", dsw_y, "side-information file (ASCII bits)")->required();
    dsw->add_option("--out", dsw_out, "JSON output file (stdout if omitted)");

    // ---- fer-sim / tail-sweep -------------------------------------------------
    std::string fsim_config, fsim_out, fsim_format = "json";
    auto* fsim = app.add_subcommand("fer-sim", "Monte-Carlo frame error rate");
    fsim->add_option("--config", fsim_config, "JSON experiment config")->required();
    fsim->add_option("--format", fsim_format, "json|csv")->capture_default_str();
    fsim->add_option("--out", fsim_out, "output file (stdout if omitted)");

    std::string tsw_config, tsw_tlist = "0,2,4,8", tsw_out;
    auto* tsw = app.add_subcommand("tail-sweep", "paired-seed FER across tail lengths");
    tsw->add_option("--config", tsw_config, "JSON experiment config (t field ignored)")->required();
    tsw->add_option("--t-list", tsw_tlist, "comma-separated tail lengths")->capture_default_str();
    tsw->add_option("--out", tsw_out, "CSV output file (stdout if omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitValidation;
    }

    try {
        if (*enc) {
            auto p = oac::Rational::parse(enc_p);
            oac::BitVec x = read_bits_file(enc_in);
            auto bs = oac::arithmetic_encode(x, oac::BiasProb(p.num, p.den),
                                             enc_w, parse_mode(enc_mode));
            auto bytes = oac::serialize(bs, static_cast<uint8_t>(enc_w));
            std::ofstream out(enc_out, std::ios::binary);
            if (!out) throw std::invalid_argument("cannot open " + enc_out);
            out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<long>(bytes.size()));
        } else if (*decc) {
            auto p = oac::Rational::parse(dec_p);
            std::string raw = read_text_file(dec_in);
            std::vector<uint8_t> bytes(raw.begin(), raw.end());
            auto parsed = oac::deserialize(bytes);
            auto x = oac::arithmetic_decode(parsed.stream, oac::BiasProb(static_cast<uint64_t>(p.num), static_cast<uint64_t>(p.den)),
                                            parsed.w, dec_n);
            write_output(dec_out, oac::to_string(x) + "\n");
        } else if (*cos) {
            auto cfg = make_config(cos_n, cos_R, cos_t);
            std::ostringstream os;
            if (cos->count("--list")) {
                for (const auto& x : oac::enumerate_coset(cos_list, cfg)) os << oac::to_string(x) << "\n";
            } else {
                auto hist = oac::coset_size_histogram(cfg);
                for (std::size_t m = 0; m < hist.size(); ++m) os << m << "," << hist[m] << "\n";
            }
            std::cout << os.str();
        } else if (*ccs) {
            auto cfg = make_config(ccs_n, ccs_R, ccs_t);
            if (ccs_level < 0 || ccs_level > cfg.n) throw std::invalid_argument("level must be in [0,n]");
            auto levels = oac::compute_ccs(cfg, ccs_bins, parse_scheme(ccs_scheme));
            const auto& f = levels[static_cast<std::size_t>(cfg.n - ccs_level)];
            std::ostringstream os;
            os << "j,u,f\n";
            for (int j = 0; j < f.size(); ++j)
                os << j << "," << fmt17((j + 0.5) / f.size()) << ","
                   << fmt17(f.bins[static_cast<std::size_t>(j)]) << "\n";
            write_output(ccs_out, os.str());
        } else if (*hds) {
            auto cfg = make_config(hds_n, hds_R, hds_t);
            oac::HdsVector v;
            if (hds_method == "exhaustive") v = oac::hds_exhaustive(cfg);
            else if (hds_method == "th1") v = oac::hds_binomial(cfg, oac::ecc_normalized(body_spectrum(cfg)));
            else if (hds_method == "th2") v = oac::hds_soft(cfg, hds_dmax);
            else if (hds_method == "th3") v = oac::hds_hard(cfg, hds_dmax);
            else if (hds_method == "th4") v = oac::hds_fast(cfg, body_spectrum(cfg).at_u(0.5));
            else throw std::invalid_argument("method must be exhaustive|th1|th2|th3|th4");
            std::ostringstream os;
            os << "d,psi\n";
            for (std::size_t d = 0; d < v.psi.size(); ++d)
                if (v.valid[d]) os << d << "," << fmt17(v.psi[d]) << "\n";
            write_output(hds_out, os.str());
        } else if (*psi3) {
            auto rep = oac::psi3_divergence(psi3_r, psi3_bound);
            json pairs = json::array();
            for (auto [i, j2] : rep.pairs) pairs.push_back({i, j2});
            json out = {{"r", psi3_r},
                        {"bound", rep.bound},
                        {"verdict", rep.verdict == oac::Convergence::Divergent ? "divergent"
                                                                               : "unknown-up-to-bound"},
                        {"pairs", pairs}};
            write_output(psi3_out, out.dump(2) + "\n");
        } else if (*fert) {
            auto R = oac::Rational::parse(fert_R);
            if (fert_unknown != 1 && fert_unknown != 2)
                throw std::invalid_argument("--unknown must be 1 or 2");
            std::ostringstream os;
            os << "eps,fer\n";
            for (double e : parse_eps_list(fert_eps)) {
                double fer = (fert_unknown == 1) ? oac::fer_one_unknown(R.value(), e)
                                                 : oac::fer_two_unknown(R.value(), e);
                os << fmt17(e) << "," << fmt17(fer) << "\n";
            }
            write_output(fert_out, os.str());
        } else if (*dsw) {
            auto cfg = make_config(dsw_n, dsw_R, dsw_t);
            oac::BitVec y = read_bits_file(dsw_y);
            oac::DecoderConfig dc;
            dc.M = dsw_M;
            dc.epsilon = dsw_eps;
            dc.use_ccs = dsw_ccs;
            std::vector<oac::Spectrum> spectra;
            if (dsw_ccs) {
                spectra = oac::compute_ccs(cfg, 1 << 12, oac::CcsScheme::Fine);
                // compute_ccs returns levels n..0; the decoder indexes by depth
                std::reverse(spectra.begin(), spectra.end());
                dc.spectra = &spectra;
            }
            oac::BitVec xh = dsw_backward ? oac::decode_backward_replacing(dsw_m, y, cfg, dc)
                                          : oac::decode_m_algorithm(dsw_m, y, cfg, dc);
            int dist = 0;
            for (std::size_t i = 0; i < y.size(); ++i) dist += (xh[i] != y[i]);
            json out = {{"m", dsw_m}, {"x_hat", oac::to_string(xh)}, {"flips_from_y", dist}};
            write_output(dsw_out, out.dump(2) + "\n");
        } else if (*fsim) {
            json j = json::parse(read_text_file(fsim_config));
            auto e = experiment_from_json(j);
            std::vector<oac::Spectrum> spectra;
            if (e.dec.use_ccs) {
                spectra = oac::compute_ccs(e.cfg, 1 << 12, oac::CcsScheme::Fine);
                std::reverse(spectra.begin(), spectra.end());
                e.dec.spectra = &spectra;
            }
            auto rep = oac::run_fer(e);
            if (fsim_format == "csv") {
                std::ostringstream os;
                os << "eps,fer,lo,hi\n";
                for (const auto& p : rep.points)
                    os << fmt17(p.eps) << "," << fmt17(p.fer) << "," << fmt17(p.ci.lo) << ","
                       << fmt17(p.ci.hi) << "\n";
                write_output(fsim_out, os.str());
            } else {
                write_output(fsim_out, report_to_json(rep, 0).dump(2) + "\n");
            }
        } else if (*tsw) {
            json j = json::parse(read_text_file(tsw_config));
            auto base = experiment_from_json(j);
            std::vector<int> ts;
            for (double v : parse_eps_list(tsw_tlist)) ts.push_back(static_cast<int>(v));
            auto reps = oac::tail_sweep(base, ts);
            std::ostringstream os;
            os << "t,eps,fer,lo,hi\n";
            for (std::size_t k = 0; k < ts.size(); ++k)
                for (const auto& p : reps[k].points)
                    os << ts[k] << "," << fmt17(p.eps) << "," << fmt17(p.fer) << ","
                       << fmt17(p.ci.lo) << "," << fmt17(p.ci.hi) << "\n";
            write_output(tsw_out, os.str());
        }
    } catch (const std::length_error& e) {
        std::cerr << "refused (complexity guard): " << e.what() << "\n";
        return kExitComplexity;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }
    return kExitOk;
}
