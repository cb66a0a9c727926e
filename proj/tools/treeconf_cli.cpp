// Command-line front end: graph construction, Betti queries, chamber
// diagrams, module building, decomposition, verification sweeps.
#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "treeconf/chambers.hpp"
#include "treeconf/complex.hpp"
#include "treeconf/decompose.hpp"
#include "treeconf/homology.hpp"
#include "treeconf/mayer_vietoris.hpp"
#include "treeconf/metric_graph.hpp"
#include "treeconf/module.hpp"
#include "treeconf/oracle.hpp"
#include "treeconf/svg.hpp"

using namespace treeconf;

namespace {

struct GraphOpts {
    int star_k = 0;
    std::vector<int> h_mn;
    std::string spec_path;
    std::string l_edge;
};

void add_graph_opts(CLI::App* cmd, GraphOpts& g) {
    cmd->set_help_flag("--help", "print help"); // frees --h for the H family
    cmd->add_option("--star", g.star_k, "builtin star graph with k legs (k >= 3)");
    cmd->add_option("--h", g.h_mn, "builtin generalized H graph (two integers m n >= 3)")
        ->expected(2);
    cmd->add_option("--spec", g.spec_path, "graph spec file (JSON)");
    cmd->add_option("--L-edge", g.l_edge,
                    "edge id whose length is the parameter L (spec graphs; default 'e1' "
                    "when present)");
}

MetricGraph make_graph(const GraphOpts& g, const Rational& L) {
    int sources = (g.star_k > 0) + (!g.h_mn.empty()) + (!g.spec_path.empty());
    if (sources != 1)
        throw CLI::ValidationError("graph", "exactly one of --star/--h/--spec is required");
    if (g.star_k > 0) return MetricGraph::star(g.star_k, L);
    if (!g.h_mn.empty()) return MetricGraph::generalized_h(g.h_mn[0], g.h_mn[1], L);
    std::ifstream in(g.spec_path);
    if (!in) throw ParseError("cannot open graph spec '" + g.spec_path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    std::string l_edge = g.l_edge;
    if (l_edge.empty() && buf.str().find("\"e1\"") != std::string::npos) l_edge = "e1";
    return MetricGraph::from_spec(buf.str(), l_edge);
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot open output file '" + out_path + "'");
    out << text;
}

std::string fmt_fpmat(const FpMat& m) {
    std::ostringstream os;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        os << "    [";
        for (std::size_t j = 0; j < m.cols(); ++j) os << (j ? " " : "") << m(i, j);
        os << "]\n";
    }
    if (m.rows() == 0) os << "    []\n";
    return os.str();
}

struct VerifyStats {
    int checked = 0, mismatched = 0;
};

// oracle comparison over every chamber of the family's arrangement
VerifyStats verify_family(std::ostream& os, const std::string& kind, int a, int b,
                          const MetricGraph& g, bool csv) {
    VerifyStats st;
    auto lines = critical_lines(g);
    auto arr = arrangement(lines);
    if (csv) os << "chamber_id,sample_r,sample_L,h0,h1,h2,oracle_h0,oracle_h1,match\n";
    for (const auto& c : arr.chambers) {
        ParamPoint p(c.sample.x, c.sample.y);
        auto h = betti(build_complex(g, p).chain_complex());
        RankPair want = kind == "star" ? rank_star(a, p.r, p.L) : rank_h(a, b, p.r, p.L);
        bool match = h.b0 == want.h0 && h.b1 == want.h1 && h.torsion_free();
        ++st.checked;
        if (!match) ++st.mismatched;
        if (csv) {
            os << c.id << "," << rat_str(p.r) << "," << rat_str(p.L) << "," << h.b0 << ","
               << h.b1 << "," << h.b2 << "," << want.h0 << "," << want.h1 << ","
               << (match ? "yes" : "no") << "\n";
        } else {
            os << "chamber " << c.id << " sample r=" << rat_str(p.r) << " L=" << rat_str(p.L)
               << " pipeline=(" << h.b0 << "," << h.b1 << "," << h.b2 << ") oracle=("
               << want.h0 << "," << want.h1 << ") " << (match ? "PASS" : "FAIL") << "\n";
        }
    }
    return st;
}

struct MvCase {
    Rational r, L;
    const char* label;
};

int verify_mv(std::ostream& os, const std::string& kind, const MetricGraph& g) {
    int failures = 0;
    std::vector<MvCase> cases;
    if (kind == "star") {
        cases = {{Rational(1, 2), 2, "r<=1, r<=L"}, {Rational(1, 2), Rational(1, 4), "r<=1, L<r"}};
    } else {
        cases = {{Rational(1, 2), 2, "r<=1, r<=L/2"},
                 {Rational(3, 4), 1, "r<=1, L/2<r<=L"},
                 {Rational(3, 4), Rational(1, 2), "r<=1, L<r"}};
    }
    for (const auto& mc : cases) {
        ParamPoint p(mc.r, mc.L);
        auto cx = build_complex(g, p);
        OrderedCover cover = kind == "star" ? star_cover(cx, g) : h_cover(cx, g);
        auto [E1, E2] = mv_pages(cx, cover);
        auto target = betti(cx.chain_complex());
        auto rep = check_convergence(E2, target);
        os << "mv " << mc.label << " r=" << rat_str(mc.r) << " L=" << rat_str(mc.L) << " E1(1,0)="
           << E1.dims[1][0] << " rank d1=" << (E1.dims[1][0] ? E1.d1[1][0].rank() : 0)
           << " E2(0,0)=" << E2.dims[0][0] << " E2(1,0)=" << E2.dims[1][0]
           << " E2(0,1)=" << E2.dims[0][1] << " convergence "
           << (rep.pass ? "PASS" : (rep.columns_out_of_range ? "SKIP" : "FAIL")) << "\n";
        if (!rep.pass && !rep.columns_out_of_range) ++failures;
    }
    return failures;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact persistent homology of two-robot configuration spaces on metric trees"};
    app.require_subcommand(1);

    GraphOpts graph;
    std::string r_str = "1", L_str = "1", out_path, format = "text";
    int degree = 0;
    std::uint32_t prime = kDefaultPrime;
    std::uint64_t seed = 0;
    bool incidence = false, mv = false;
    std::string bound_str;

    auto* cmd_betti = app.add_subcommand("betti", "Betti numbers of X^2_{r,L}");
    add_graph_opts(cmd_betti, graph);
    cmd_betti->add_option("--r", r_str, "restraint parameter (exact rational p/q)")->required();
    cmd_betti->add_option("--L", L_str, "length of the parameter edge")->required();

    auto* cmd_complex = app.add_subcommand("complex", "cell counts and incidence of X^2_{r,L}");
    add_graph_opts(cmd_complex, graph);
    cmd_complex->add_option("--r", r_str)->required();
    cmd_complex->add_option("--L", L_str)->required();
    cmd_complex->add_flag("--incidence", incidence, "list the full boundary incidence");

    auto* cmd_chambers = app.add_subcommand("chambers", "critical lines and chamber poset");
    add_graph_opts(cmd_chambers, graph);
    cmd_chambers->add_option("--out", out_path, "write output here instead of stdout");
    cmd_chambers->add_option("--format", format, "text | svg");
    cmd_chambers->add_option("--bound", bound_str, "window bound for the arrangement (rational)");

    auto* cmd_module = app.add_subcommand("module", "chamber-indexed persistence module");
    add_graph_opts(cmd_module, graph);
    cmd_module->add_option("--degree", degree, "homology degree 0 or 1")->required();
    cmd_module->add_option("--prime", prime, "field characteristic");

    auto* cmd_dec = app.add_subcommand("decompose", "indecomposable direct summands");
    add_graph_opts(cmd_dec, graph);
    cmd_dec->add_option("--degree", degree, "homology degree 0 or 1")->required();
    cmd_dec->add_option("--prime", prime, "field characteristic");
    cmd_dec->add_option("--seed", seed, "random seed for the splitting strategy");

    auto* cmd_verify = app.add_subcommand("verify", "oracle vs pipeline sweep over all chambers");
    add_graph_opts(cmd_verify, graph);
    cmd_verify->add_option("--seed", seed, "seed (recorded in output for reproducibility)");
    cmd_verify->add_option("--format", format, "text | csv");
    cmd_verify->add_option("--out", out_path);
    cmd_verify->add_flag("--mv", mv, "also check the Mayer-Vietoris covers");

    auto* cmd_plot = app.add_subcommand("plot", "SVG of the arrangement with Betti labels");
    add_graph_opts(cmd_plot, graph);
    cmd_plot->add_option("--out", out_path, "output SVG path")->required();

    auto* cmd_subdiv = app.add_subcommand("subdivide", "split one edge at its midpoint");
    std::string subdiv_edge;
    add_graph_opts(cmd_subdiv, graph);
    cmd_subdiv->add_option("--edge", subdiv_edge, "edge id to subdivide")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (cmd_betti->parsed() || cmd_complex->parsed()) {
            Rational r = parse_rational(r_str), L = parse_rational(L_str);
            if (r <= 0 || L <= 0) throw ParseError("r and L must be positive");
            MetricGraph g = make_graph(graph, L);
            ParamPoint p(r, L);
            auto cx = build_complex(g, p);
            if (cmd_complex->parsed()) {
                std::ostringstream os;
                os << "cells0=" << cx.size(0) << " cells1=" << cx.size(1)
                   << " cells2=" << cx.size(2) << "\n";
                if (incidence) {
                    for (std::size_t i = 0; i < cx.cells0.size(); ++i)
                        os << "v" << i << " " << cx.cells0[i].key.str() << "\n";
                    for (std::size_t i = 0; i < cx.cells1.size(); ++i)
                        os << "e" << i << " " << cx.cells1[i].key.a.str() << " -> "
                           << cx.cells1[i].key.b.str() << "\n";
                    for (std::size_t i = 0; i < cx.cells2.size(); ++i) {
                        os << "f" << i << " bdry";
                        for (auto [e, s] : cx.cells2[i].bdry)
                            os << " " << (s > 0 ? "+" : "-") << "e" << e;
                        os << "\n";
                    }
                }
                emit(os.str(), out_path);
            } else {
                auto h = betti(cx.chain_complex());
                std::ostringstream os;
                os << "h0=" << h.b0 << " h1=" << h.b1 << " h2=" << h.b2 << "\n";
                auto dump_torsion = [&](const char* name, const std::vector<Integer>& t) {
                    if (t.empty()) return;
                    os << name << "=";
                    for (std::size_t i = 0; i < t.size(); ++i) os << (i ? "," : "") << t[i];
                    os << "\n";
                };
                dump_torsion("torsion0", h.torsion0);
                dump_torsion("torsion1", h.torsion1);
                emit(os.str(), out_path);
            }
            return 0;
        }

        if (cmd_chambers->parsed() || cmd_plot->parsed()) {
            MetricGraph g = make_graph(graph, 1);
            auto lines = critical_lines(g);
            auto arr = bound_str.empty() ? arrangement(lines)
                                         : arrangement(lines, parse_rational(bound_str));
            if (cmd_plot->parsed() || format == "svg") {
                std::vector<std::pair<long, long>> bettis;
                for (const auto& c : arr.chambers) {
                    ParamPoint p(c.sample.x, c.sample.y);
                    auto h = betti(build_complex(g, p).chain_complex());
                    bettis.push_back({h.b0, h.b1});
                }
                emit(arrangement_svg(arr, bettis), out_path);
                return 0;
            }
            std::ostringstream os;
            for (const auto& ln : arr.lines)
                os << "line: " << ln.alpha << "*r + " << ln.beta << "*L = " << ln.gamma << "\n";
            for (const auto& c : arr.chambers) {
                os << "chamber " << c.id << ": sample r=" << rat_str(c.sample.x)
                   << " L=" << rat_str(c.sample.y) << " signs=";
                for (int s : c.signs) os << (s > 0 ? '+' : '-');
                os << "\n";
            }
            for (auto [s, t] : arr.covering) os << "hasse: " << s << " -> " << t << "\n";
            emit(os.str(), out_path);
            return 0;
        }

        if (cmd_module->parsed()) {
            MetricGraph g = make_graph(graph, 1);
            auto M = build_module(g, degree, prime);
            std::ostringstream os;
            for (int c = 0; c < M.poset.n; ++c)
                os << "chamber " << c << " sample r=" << rat_str(M.samples[c].r)
                   << " L=" << rat_str(M.samples[c].L) << " dim=" << M.dims[c] << "\n";
            for (const auto& [e, m] : M.maps) {
                os << "map " << e.first << " -> " << e.second << " (" << m.rows() << "x"
                   << m.cols() << ")\n"
                   << fmt_fpmat(m);
            }
            emit(os.str(), out_path);
            return 0;
        }

        if (cmd_dec->parsed()) {
            MetricGraph g = make_graph(graph, 1);
            auto M = build_module(g, degree, prime);
            auto res = decompose(M, seed);
            auto classes = multiplicity_table(M, res.summands);
            std::ostringstream os;
            os << "summands=" << res.summands.size() << " classes=" << classes.size()
               << " undecided=" << res.undecided << "\n";
            for (std::size_t k = 0; k < classes.size(); ++k) {
                const auto& cl = classes[k];
                os << "class " << k << ": " << (cl.interval ? "interval" : "non-interval")
                   << " multiplicity=" << cl.multiplicity << " support={";
                bool first = true;
                for (int c : cl.support) {
                    os << (first ? "" : ",") << c;
                    first = false;
                }
                os << "} dims=[";
                for (std::size_t i = 0; i < cl.dim_vector.size(); ++i)
                    os << (i ? "," : "") << cl.dim_vector[i];
                os << "]\n";
            }
            emit(os.str(), out_path);
            return res.undecided == 0 ? 0 : 1;
        }

        if (cmd_verify->parsed()) {
            std::string kind;
            int a = 0, b = 0;
            if (graph.star_k > 0) {
                kind = "star";
                a = graph.star_k;
            } else if (!graph.h_mn.empty()) {
                kind = "h";
                a = graph.h_mn[0];
                b = graph.h_mn[1];
            } else {
                throw CLI::ValidationError("verify", "verify needs --star or --h (oracle family)");
            }
            MetricGraph g = make_graph(graph, 1);
            std::ostringstream os;
            os << "verify " << kind << " " << a << (kind == "h" ? " " + std::to_string(b) : "")
               << " seed=" << seed << "\n";
            auto st = verify_family(os, kind, a, b, g, format == "csv");
            int mv_failures = 0;
            if (mv) mv_failures = verify_mv(os, kind, g);
            os << "checked=" << st.checked << " mismatched=" << st.mismatched
               << (mv ? " mv_failures=" + std::to_string(mv_failures) : "") << "\n";
            emit(os.str(), out_path);
            return (st.mismatched == 0 && mv_failures == 0) ? 0 : 1;
        }

        if (cmd_subdiv->parsed()) {
            MetricGraph g = make_graph(graph, 1);
            auto s = subdivide_edge(g, subdiv_edge);
            emit(graph_to_spec(s) + "\n", out_path);
            return 0;
        }
    } catch (const CLI::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
