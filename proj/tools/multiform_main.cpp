// multiform: n-linear form toolkit.
//
// Subcommands: symmetrize, check-witness, decompose, align, radical, eval,
// gen. All inputs and outputs are JSON with numbers as strings. Exit codes:
//   0 success
//   1 I/O, schema, or input-validation error
//   2 rejected input with a counterexample (invalid witness, misaligned
//     decompositions)
//   3 exact field lacks a needed root (rerun with a float field)
//   4 numerical instability

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "multiform/json_io.hpp"

using nlohmann::json;
using namespace multiform;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitRejected = 2;
constexpr int kExitNoRoot = 3;
constexpr int kExitUnstable = 4;

json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ParseError("bad JSON in '" + path + "': " + e.what());
    }
    return j;
}

void write_output(const json& j, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << j.dump(2) << "\n";
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw ParseError("cannot write '" + out_path + "'");
    out << j.dump(2) << "\n";
}

TolerancePolicy tolerance_from(double tol_flag) {
    TolerancePolicy pol;
    if (tol_flag > 0) {
        pol.rel = tol_flag;
        pol.abs = tol_flag * 1e-3;
        return pol;
    }
    if (const char* env = std::getenv("MULTIFORM_TOL")) {
        char* end = nullptr;
        double v = std::strtod(env, &end);
        if (end != env && v > 0) {
            pol.rel = v;
            pol.abs = v * 1e-3;
        }
    }
    return pol;
}

Witness load_witness(const std::string& f_path, const std::string& g_path,
                     const std::string& maps_path, Kind field) {
    Witness w;
    w.source = form_from_json(read_json(f_path)).convert_to(field);
    w.target = form_from_json(read_json(g_path)).convert_to(field);
    std::vector<LinearMap> maps = maps_from_json(read_json(maps_path));
    for (std::size_t i = 0; i < maps.size(); ++i) {
        LinearMap m = maps[i].convert_to(field);
        if (m.rows() != w.source.dim() || m.cols() != w.source.dim())
            throw ParseError("map " + std::to_string(i) + " has the wrong shape");
        if (is_exact(field)) {
            if (det(m).is_zero()) throw ParseError("map " + std::to_string(i) + " is singular");
        } else if (rank(m, TolerancePolicy{}) != m.rows()) {
            throw ParseError("map " + std::to_string(i) + " is singular");
        }
        w.maps.push_back(std::move(m));
    }
    return w;
}

Kind parse_field(const std::string& name) {
    auto k = kind_from_name(name);
    if (!k) throw ParseError("unknown field '" + name + "' (expected Q, Qi, R64, or C64)");
    return *k;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"n-linear form toolkit: congruence from symmetric equivalence, "
                 "direct-sum decomposition, alignment"};
    app.require_subcommand(1);

    std::string form_f, form_g, maps_path, form_path, d1_path, d2_path, args_path, spec_path,
        out_path, out_dir, field_name = "Q";
    double tol_flag = 0;
    bool verify = false, full_sweep = false;
    std::uint64_t seed_override = 0;
    bool seed_given = false;

    auto* sym = app.add_subcommand("symmetrize", "turn a symmetric-equivalence witness into a congruence");
    sym->add_option("--form-f", form_f)->required();
    sym->add_option("--form-g", form_g)->required();
    sym->add_option("--maps", maps_path)->required();
    sym->add_option("--field", field_name)->required();
    sym->add_option("--tol", tol_flag);
    sym->add_option("--out", out_path);
    sym->add_flag("--verify", verify);

    auto* chk = app.add_subcommand("check-witness", "verify the defining identity of a witness");
    chk->add_option("--form-f", form_f)->required();
    chk->add_option("--form-g", form_g)->required();
    chk->add_option("--maps", maps_path)->required();
    chk->add_option("--field", field_name)->required();
    chk->add_option("--tol", tol_flag);
    chk->add_option("--out", out_path);
    chk->add_flag("--full-sweep", full_sweep);

    auto* dec = app.add_subcommand("decompose", "split a form along its index support graph");
    dec->add_option("--form", form_path)->required();
    dec->add_option("--tol", tol_flag);
    dec->add_option("--out", out_path);
    dec->add_flag("--verify", verify);

    auto* ali = app.add_subcommand("align", "match two decompositions of one form");
    ali->add_option("--form", form_path)->required();
    ali->add_option("--d1", d1_path)->required();
    ali->add_option("--d2", d2_path)->required();
    ali->add_option("--tol", tol_flag);
    ali->add_option("--out", out_path);
    ali->add_flag("--verify", verify);

    auto* rad = app.add_subcommand("radical", "basis of the radical subspace");
    rad->add_option("--form", form_path)->required();
    rad->add_option("--tol", tol_flag);
    rad->add_option("--out", out_path);
    rad->add_flag("--verify", verify);

    auto* ev = app.add_subcommand("eval", "evaluate a form on coordinate vectors");
    ev->add_option("--form", form_path)->required();
    ev->add_option("--args", args_path)->required();
    ev->add_option("--out", out_path);

    auto* gen = app.add_subcommand("gen", "emit fixture files from a generator spec");
    gen->add_option("--spec", spec_path)->required();
    gen->add_option("--out-dir", out_dir)->required();
    auto* seed_opt = gen->add_option("--seed", seed_override);

    CLI11_PARSE(app, argc, argv);
    seed_given = seed_opt->count() > 0;

    try {
        TolerancePolicy pol = tolerance_from(tol_flag);

        if (sym->parsed()) {
            Kind field = parse_field(field_name);
            Witness w = load_witness(form_f, form_g, maps_path, field);
            SymmetrizeOptions opt;
            opt.pol = pol;
            try {
                SignedCongruence cert;
                if (is_complex(field)) {
                    cert.psi = symmetrize_complex(w, opt);
                    cert.blocks = {SignedBlock{LinearMap::identity(w.source.dim(), field), 1}};
                } else {
                    cert = symmetrize_real(w, opt);
                }
                double residual = verify_congruence(w.source, w.target, cert.psi, &cert.blocks, pol);
                json out = certificate_to_json(cert, residual);
                if (verify) {
                    SignedCongruence reloaded = certificate_from_json(out, field, w.source.dim());
                    double again =
                        verify_congruence(w.source, w.target, reloaded.psi, &reloaded.blocks, pol);
                    out["verified_residual"] = json(std::to_string(again));
                }
                write_output(out, out_path);
                return kExitOk;
            } catch (const WitnessInvalid& e) {
                json out{{"error", "witness invalid"},
                         {"counterexample", json{{"reordering", e.reordering}, {"index", e.index}}}};
                write_output(out, out_path);
                return kExitRejected;
            } catch (const NoRootInField& e) {
                json out{{"error", e.what()},
                         {"hint", "rerun with --field R64 or --field C64"}};
                write_output(out, out_path);
                return kExitNoRoot;
            } catch (const EigenvalueNotFound& e) {
                json out{{"error", e.what()},
                         {"hint", "rerun with --field R64 or --field C64"}};
                write_output(out, out_path);
                return kExitNoRoot;
            } catch (const NumericalInstability& e) {
                json out{{"error", e.what()}};
                write_output(out, out_path);
                return kExitUnstable;
            }
        }

        if (chk->parsed()) {
            Kind field = parse_field(field_name);
            Witness w = load_witness(form_f, form_g, maps_path, field);
            WitnessReport rep = check_witness(w, pol, full_sweep);
            if (rep.ok) {
                write_output(json{{"ok", true}, {"maxResidual", rep.max_residual}}, out_path);
                return kExitOk;
            }
            write_output(json{{"ok", false}, {"counterexample", violation_to_json(*rep.violation)}},
                         out_path);
            return kExitRejected;
        }

        if (dec->parsed()) {
            MultiForm f = form_from_json(read_json(form_path));
            Decomposition d = support_blocks(f, pol);
            if (verify) validate_decomposition(f, d, pol, false);
            write_output(decomposition_to_json(d), out_path);
            return kExitOk;
        }

        if (ali->parsed()) {
            MultiForm f = form_from_json(read_json(form_path));
            Decomposition d1 = decomposition_from_json(read_json(d1_path));
            Decomposition d2 = decomposition_from_json(read_json(d2_path));
            try {
                Alignment a = align_decompositions(f, d1, d2, pol);
                json block_maps = json::array();
                for (const auto& m : a.block_maps) block_maps.push_back(map_to_json(m));
                json out{{"permutation", a.permutation}, {"blockMaps", std::move(block_maps)}};
                if (verify) {
                    for (std::size_t p = 0; p < a.permutation.size(); ++p) {
                        MultiForm fu = restrict_to_subspace(f, d1.blocks[p]);
                        MultiForm fv = restrict_to_subspace(
                            f, d2.blocks[static_cast<std::size_t>(a.permutation[p])]);
                        if (max_abs_diff(change_basis(fu, a.block_maps[p]), fv) >
                            pol.abs + pol.rel * std::max(1.0, fu.max_abs()))
                            throw NumericalInstability("alignment certificate failed re-verification");
                    }
                }
                write_output(out, out_path);
                return kExitOk;
            } catch (const OffDiagonalNonzero& e) {
                write_output(json{{"error", e.what()}, {"blockP", e.block_p}, {"blockQ", e.block_q}},
                             out_path);
                return kExitRejected;
            } catch (const BlockCountMismatch& e) {
                write_output(json{{"error", e.what()}}, out_path);
                return kExitRejected;
            }
        }

        if (rad->parsed()) {
            MultiForm f = form_from_json(read_json(form_path));
            LinearMap r = radical(f, pol);
            json vectors = json::array();
            for (int c = 0; c < r.cols(); ++c) {
                json v = json::array();
                for (int i = 0; i < r.rows(); ++i) v.push_back(r.at(i, c).str());
                vectors.push_back(std::move(v));
            }
            if (verify && f.dim() > 0) {
                // every returned vector must annihilate the form in every slot
                double threshold = pol.abs + pol.rel * std::max(1.0, f.max_abs());
                for (int c = 0; c < r.cols(); ++c) {
                    std::vector<Scalar> v = r.col_vector(c);
                    for (int slot = 0; slot < f.arity(); ++slot) {
                        std::vector<int> rest(static_cast<std::size_t>(f.arity()), 0);
                        do {
                            std::vector<std::vector<Scalar>> xs;
                            for (int s = 0; s < f.arity(); ++s) {
                                std::vector<Scalar> e(static_cast<std::size_t>(f.dim()),
                                                      Scalar::zero(f.kind()));
                                e[static_cast<std::size_t>(rest[static_cast<std::size_t>(s)])] =
                                    Scalar::one(f.kind());
                                xs.push_back(s == slot ? v : e);
                            }
                            if (eval(f, xs).abs_approx() > threshold)
                                throw NumericalInstability("radical certificate failed re-verification");
                        } while (next_index(rest, f.dim()));
                    }
                }
            }
            write_output(json{{"field", kind_name(f.kind())}, {"radical", std::move(vectors)}},
                         out_path);
            return kExitOk;
        }

        if (ev->parsed()) {
            MultiForm f = form_from_json(read_json(form_path));
            auto xs = vectors_from_json(read_json(args_path), f.kind(), f.dim());
            if (static_cast<int>(xs.size()) != f.arity())
                throw ParseError("eval needs exactly one vector per slot");
            Scalar v = eval(f, xs);
            write_output(json{{"value", v.str()}}, out_path);
            return kExitOk;
        }

        if (gen->parsed()) {
            auto [spec, type] = gen_spec_from_json(read_json(spec_path));
            if (seed_given) spec.seed = seed_override;
            std::filesystem::create_directories(out_dir);
            auto path = [&](const char* name) { return (std::filesystem::path(out_dir) / name).string(); };
            if (type == "witness") {
                Witness w = gen_witness(spec);
                write_output(form_to_json(w.source), path("form_f.json"));
                write_output(form_to_json(w.target), path("form_g.json"));
                write_output(maps_to_json(w.maps), path("maps.json"));
            } else {
                DecomposableInstance inst = gen_decomposable(spec);
                write_output(form_to_json(inst.form), path("form.json"));
                write_output(decomposition_to_json(inst.d1), path("d1.json"));
                write_output(decomposition_to_json(inst.d2), path("d2.json"));
                write_output(json{{"permutation", inst.hidden_perm}}, path("perm.json"));
            }
            write_output(gen_spec_to_json(spec, type), path("spec.json"));
            return kExitOk;
        }
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const NoRootInField& e) {
        std::cerr << "error: " << e.what() << " (rerun with a float field)\n";
        return kExitNoRoot;
    } catch (const NumericalInstability& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUnstable;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
    return kExitIo;
}
