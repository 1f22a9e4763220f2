// ht: command-line front door for the htensor library. One verb per
// construction; every stochastic verb takes an explicit --seed so runs are
// reproducible byte for byte.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "htensor/htensor.hpp"

namespace {

using namespace htensor;

std::string fmt(double v) { return detail::format_double(v); }

NormalizationMode parse_norm(const std::string& name) {
    if (name == "unit") return NormalizationMode::Unit;
    if (name == "sqrt-factorial") return NormalizationMode::SqrtFactorial;
    if (name == "projector") return NormalizationMode::Projector;
    throw DomainError("unknown --norm value '" + name + "'");
}

Permutation parse_perm(const std::vector<int>& image) {
    try {
        return Permutation::from_image(image);
    } catch (const DomainError& e) {
        throw DomainError(std::string("--perm: ") + e.what());
    }
}

std::vector<std::pair<int, int>> parse_pairs(const std::string& text) {
    std::vector<std::pair<int, int>> pairs;
    if (text.empty()) return pairs;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t comma = text.find(',', pos);
        std::string item = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        std::size_t colon = item.find(':');
        if (colon == std::string::npos)
            throw DomainError("--pairs: expected 'aMode:bMode' items, got '" + item + "'");
        try {
            pairs.emplace_back(std::stoi(item.substr(0, colon)), std::stoi(item.substr(colon + 1)));
        } catch (const std::exception&) {
            throw DomainError("--pairs: bad integer in '" + item + "'");
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return pairs;
}

std::vector<double> load_vector(const std::string& path) {
    DenseTensor t = read_tensor_file(path);
    if (t.order() != 1) throw DomainError(path + ": expected an order-1 tensor (vector)");
    return t.data();
}

void write_output(const std::string& path, const DenseTensor& t) {
    write_tensor_file(path, t);
    std::cout << "wrote " << path << " (order " << t.order() << ", dims";
    for (int e : t.shape()) std::cout << " " << e;
    std::cout << ")\n";
}

struct NonConvergence : Error {
    using Error::Error;
};

// ---------------------------------------------------------------------- make

struct MakeArgs {
    std::string kind;
    std::vector<std::string> inputs;
    std::string output;
    int half_order = 1;
    int dim = 2;
    std::vector<int> dims;
    std::string norm = "unit";
};

void run_make(const MakeArgs& a) {
    DenseTensor out;
    if (a.kind == "identity") {
        out = identity_tensor(a.half_order, a.dim);
    } else if (a.kind == "zero") {
        if (a.dims.empty()) throw DomainError("make zero: --dims is required");
        out = DenseTensor(Shape(a.dims.begin(), a.dims.end()));
    } else if (a.kind == "sas") {
        out = standard_sas(a.dim);
    } else if (a.kind == "wedge" || a.kind == "vee" || a.kind == "from-vectors") {
        if (a.inputs.empty()) throw DomainError("make " + a.kind + ": vector files are required");
        std::vector<std::vector<double>> vs;
        vs.reserve(a.inputs.size());
        for (const std::string& path : a.inputs) vs.push_back(load_vector(path));
        if (a.kind == "wedge")
            out = wedge(vs, parse_norm(a.norm));
        else if (a.kind == "vee")
            out = vee(vs, parse_norm(a.norm));
        else
            out = outer_chain(vs);
    } else {
        throw DomainError("make: unknown kind '" + a.kind + "'");
    }
    write_output(a.output, out);
}

// ------------------------------------------------------------------- product

struct ProductArgs {
    std::string kind;
    std::vector<std::string> inputs;
    std::string output;
    int mode = 1;
    int modes = 1;
    std::string pairs;
    std::vector<int> place;
    bool literal = false;
    bool with_sign = false;
    std::string norm = "unit";
};

void run_product(const ProductArgs& a) {
    if (a.inputs.size() != 2) throw DomainError("product: exactly two input files are required");
    DenseTensor lhs = read_tensor_file(a.inputs[0]);
    DenseTensor out;
    if (a.kind == "outer") {
        out = outer_product(lhs, read_tensor_file(a.inputs[1]));
    } else if (a.kind == "mode") {
        out = mode_product(lhs, read_tensor_file(a.inputs[1]), a.mode);
    } else if (a.kind == "t") {
        out = t_product(lhs, read_tensor_file(a.inputs[1]), !a.literal);
    } else if (a.kind == "s") {
        ContractionSpec spec;
        spec.pairs = parse_pairs(a.pairs);
        spec.placement = a.place;
        out = s_product(lhs, read_tensor_file(a.inputs[1]), spec);
    } else if (a.kind == "contract") {
        out = contract_k(lhs, read_tensor_file(a.inputs[1]), a.modes);
    } else if (a.kind == "bowtie") {
        out = bowtie(lhs, load_vector(a.inputs[1]), a.with_sign, parse_norm(a.norm));
    } else {
        throw DomainError("product: unknown kind '" + a.kind + "'");
    }
    write_output(a.output, out);
}

// ------------------------------------------------------------- plain verbs

void run_invert(const std::string& input, const std::string& output, double pivot_tol) {
    DenseTensor a = read_tensor_file(input);
    DenseTensor b = invert(a, pivot_tol);
    const int k = a.order() / 2;
    double residual = max_abs_diff(contract_k(a, b, k), identity_tensor(k, a.dim()));
    std::cout << "inverse residual max|A.B - I| = " << fmt(residual) << "\n";
    write_output(output, b);
}

void run_det(const std::string& input) {
    std::cout << "ns-det " << fmt(ns_det(read_tensor_file(input))) << "\n";
}

void run_unfold(const std::string& input, const std::string& output) {
    NSMatrix ns = normal_unfold(read_tensor_file(input));
    std::cout << "ns-matrix side " << ns.data.rows() << " (n=" << ns.n << ", k=" << ns.k << ")\n";
    write_output(output, matrix_to_tensor(ns.data));
}

struct ClassifyArgs {
    std::string kind;
    std::string input;
    std::vector<int> perm;
    bool with_sign = false;
    double tol = 1e-10;
};

void run_classify(const ClassifyArgs& a) {
    DenseTensor t = read_tensor_file(a.input);
    SymmetryCheck check;
    std::string label = a.kind;
    if (a.kind == "symmetric") {
        check = is_symmetric(t, a.tol);
    } else if (a.kind == "antisymmetric") {
        check = is_antisymmetric(t, a.tol);
    } else if (a.kind == "sigma") {
        if (a.perm.empty()) throw DomainError("classify sigma: --perm is required");
        Permutation sigma = parse_perm(a.perm);
        check = a.with_sign ? is_sign_symmetric(t, sigma, a.tol) : is_sigma_symmetric(t, sigma, a.tol);
        label = a.with_sign ? "sigma-sign-symmetric" : "sigma-symmetric";
    } else {
        throw DomainError("classify: unknown kind '" + a.kind + "'");
    }
    std::cout << label << " " << (check.ok ? "yes" : "no") << " (max violation " << fmt(check.violation)
              << ", tol " << fmt(a.tol) << ")\n";
}

struct DecomposeArgs {
    std::string kind;
    std::string input;
    std::string output;
    double tol = 1e-10;
};

void run_decompose(const DecomposeArgs& a) {
    if (a.kind == "sas") {
        DenseTensor t = read_tensor_file(a.input);
        SasDecomposition d = sas_decompose(t, a.tol);
        std::cout << "separable " << (d.separable ? "yes" : "no") << " residual " << fmt(d.residual)
                  << " scale " << fmt(d.witness.scale) << "\n";
        if (!a.output.empty()) {
            // Rows: witness vectors with the scale absorbed, so that a plain
            // unit-normalization wedge of the rows reproduces the tensor.
            const int m = t.order(), n = t.dim();
            double mag = std::pow(std::abs(d.witness.scale), 1.0 / m);
            DenseTensor rows(Shape{m, n});
            for (int i = 1; i <= m; ++i) {
                double c = mag * (i == 1 && d.witness.scale < 0 ? -1.0 : 1.0);
                for (int j = 1; j <= n; ++j)
                    rows.at({i, j}) = c * d.witness.vectors[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)];
            }
            write_output(a.output, rows);
        }
    } else if (a.kind == "antisym-matrix") {
        DenseTensor t = read_tensor_file(a.input);
        MatrixSeparability s = antisym_matrix_separability(tensor_to_matrix(t), a.tol);
        std::cout << "separable " << (s.separable ? "yes" : "no") << " rank " << s.rank << "\n";
    } else {
        throw DomainError("decompose: unknown kind '" + a.kind + "'");
    }
}

struct EigArgs {
    std::string input;
    std::string output;
    std::uint64_t seed = 0;
    double shift = 0.0;
    bool shift_set = false;
    int max_iter = 500;
    double tol = 1e-10;
};

void run_eig(const EigArgs& a) {
    DenseTensor t = read_tensor_file(a.input);
    double shift_value = a.shift_set ? a.shift : 1.0 + frobenius_norm(t);
    EigenPair p = sshopm(t, shift_value, a.seed, a.max_iter, a.tol);
    std::cout << "lambda " << fmt(p.lambda) << " residual " << fmt(p.residual) << " iterations "
              << p.iterations << " converged " << (p.converged ? "yes" : "no") << "\n";
    if (!a.output.empty()) write_output(a.output, from_vector(p.u));
    if (!p.converged)
        throw NonConvergence("eig: no H-eigenpair below tolerance " + fmt(a.tol) + " within " +
                             std::to_string(a.max_iter) + " iterations");
}

struct ProbeArgs {
    std::string input;
    std::string output;
    int samples = 1000;
    std::uint64_t seed = 0;
};

void run_probe(const ProbeArgs& a) {
    DenseTensor t = read_tensor_file(a.input);
    ProbeReport r = definiteness_probe(t, a.samples, a.seed);
    std::cout << "verdict " << probe_verdict_name(r.verdict) << " min " << fmt(r.min_witness.value)
              << " max " << fmt(r.max_witness.value) << " samples " << r.samples << "\n";
    if (!a.output.empty()) {
        const int n = t.dim();
        DenseTensor pair(Shape{2, n});
        for (int j = 1; j <= n; ++j) {
            pair.at({1, j}) = r.max_witness.x[static_cast<std::size_t>(j - 1)];
            pair.at({2, j}) = r.min_witness.x[static_cast<std::size_t>(j - 1)];
        }
        write_output(a.output, pair);
    }
}

struct RankArgs {
    std::string kind;
    std::vector<std::string> inputs;
    std::string output;
    int max_rank = 4;
    int restarts = 10;
    int iters = 400;
    std::uint64_t seed = 0;
    double fit_tol = 1e-8;
    double tol = 1e-10;
};

void run_rank(const RankArgs& a) {
    if (a.kind == "estimate") {
        if (a.inputs.size() != 1) throw DomainError("rank estimate: exactly one input file is required");
        DenseTensor t = read_tensor_file(a.inputs[0]);
        RankEstimate est = rank_estimate(t, a.max_rank, a.restarts, a.iters, a.seed, a.fit_tol);
        std::string table = format_rank_evidence(est);
        std::cout << table;
        if (!a.output.empty()) {
            std::ofstream out(a.output, std::ios::binary);
            if (!out) throw Error("cannot open '" + a.output + "' for writing");
            out << table;
            std::cout << "wrote " << a.output << "\n";
        }
    } else if (a.kind == "family") {
        if (a.inputs.empty()) throw DomainError("rank family: vector files are required");
        std::vector<std::vector<double>> vs;
        for (const std::string& path : a.inputs) vs.push_back(load_vector(path));
        int r = permuted_family_rank(vs, a.tol);
        std::cout << "family-rank " << r << " of " << static_cast<long long>(factorial(static_cast<int>(vs.size())))
                  << "\n";
    } else {
        throw DomainError("rank: unknown kind '" + a.kind + "'");
    }
}

struct SubspaceArgs {
    int dim = 2;
    std::vector<int> perm;
    bool with_sign = false;
};

void run_subspace(const SubspaceArgs& a) {
    Permutation sigma = parse_perm(a.perm);
    std::cout << "dimension " << fixed_subspace_dim(sigma.size(), a.dim, sigma, a.with_sign) << "\n";
}

void run_convert(const std::string& input, const std::string& output) {
    write_output(output, read_tensor_file(input));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dense hypercubic tensor algebra toolkit"};
    app.require_subcommand(1);

    MakeArgs make_args;
    CLI::App* make = app.add_subcommand("make", "construct a tensor and write it to a file");
    make->add_option("kind", make_args.kind, "identity|zero|sas|wedge|vee|from-vectors")->required();
    make->add_option("inputs", make_args.inputs, "vector files (wedge|vee|from-vectors)");
    make->add_option("--half-order", make_args.half_order, "half-order k for identity");
    make->add_option("--dim", make_args.dim, "dimension n");
    make->add_option("--dims", make_args.dims, "extents for zero");
    make->add_option("--norm", make_args.norm, "unit|sqrt-factorial|projector (default unit)");
    make->add_option("-o,--output", make_args.output, "output tensor file")->required();

    ProductArgs product_args;
    CLI::App* product = app.add_subcommand("product", "multiply two tensors");
    product->add_option("kind", product_args.kind, "outer|mode|t|s|contract|bowtie")->required();
    product->add_option("inputs", product_args.inputs, "two input files")->required()->expected(2);
    product->add_option("--mode", product_args.mode, "mode index for the mode product");
    product->add_option("--modes", product_args.modes, "number of contracted modes for contract");
    product->add_option("--pairs", product_args.pairs, "contraction pairs aMode:bMode,... for s");
    product->add_option("--place", product_args.place, "output slots of the surviving modes for s");
    product->add_flag("--literal", product_args.literal, "literal (non-circular) t-product indexing");
    product->add_flag("--signed", product_args.with_sign, "alternating insertion signs for bowtie");
    product->add_option("--norm", product_args.norm, "normalization for bowtie (default unit)");
    product->add_option("-o,--output", product_args.output, "output tensor file")->required();

    std::string invert_input, invert_output;
    double pivot_tol = 1e-12;
    CLI::App* invert_cmd = app.add_subcommand("invert", "invert an even-order hypercubic tensor");
    invert_cmd->add_option("input", invert_input, "input tensor file")->required();
    invert_cmd->add_option("--pivot-tol", pivot_tol, "relative pivot threshold (default 1e-12)");
    invert_cmd->add_option("-o,--output", invert_output, "output tensor file")->required();

    std::string det_input;
    CLI::App* det_cmd = app.add_subcommand("det", "determinant of the normal unfolding");
    det_cmd->add_option("input", det_input, "input tensor file")->required();

    std::string unfold_input, unfold_output;
    CLI::App* unfold_cmd = app.add_subcommand("unfold", "write the NS matrix of an even-order tensor");
    unfold_cmd->add_option("input", unfold_input, "input tensor file")->required();
    unfold_cmd->add_option("-o,--output", unfold_output, "output matrix file")->required();

    ClassifyArgs classify_args;
    CLI::App* classify = app.add_subcommand("classify", "symmetry checks");
    classify->add_option("kind", classify_args.kind, "symmetric|antisymmetric|sigma")->required();
    classify->add_option("input", classify_args.input, "input tensor file")->required();
    classify->add_option("--perm", classify_args.perm, "permutation image for sigma");
    classify->add_flag("--signed", classify_args.with_sign, "check sign symmetry for sigma");
    classify->add_option("--tol", classify_args.tol, "violation tolerance (default 1e-10)");

    DecomposeArgs decompose_args;
    CLI::App* decompose = app.add_subcommand("decompose", "separability tests");
    decompose->add_option("kind", decompose_args.kind, "sas|antisym-matrix")->required();
    decompose->add_option("input", decompose_args.input, "input tensor file")->required();
    decompose->add_option("--tol", decompose_args.tol, "acceptance tolerance (default 1e-10)");
    decompose->add_option("-o,--output", decompose_args.output, "witness vectors output (sas)");

    EigArgs eig_args;
    CLI::App* eig = app.add_subcommand("eig", "H-eigenpair search");
    std::string eig_kind;
    eig->add_option("kind", eig_kind, "sshopm")->required();
    eig->add_option("input", eig_args.input, "input tensor file")->required();
    eig->add_option("--seed", eig_args.seed, "RNG seed")->required();
    eig->add_option("--shift", eig_args.shift, "iteration shift (default 1+|A|_F)")
        ->each([&](const std::string&) { eig_args.shift_set = true; });
    eig->add_option("--max-iter", eig_args.max_iter, "iteration cap (default 500)");
    eig->add_option("--tol", eig_args.tol, "residual tolerance (default 1e-10)");
    eig->add_option("-o,--output", eig_args.output, "eigenvector output file");

    ProbeArgs probe_args;
    CLI::App* probe = app.add_subcommand("probe", "definiteness sampling probe");
    std::string probe_kind;
    probe->add_option("kind", probe_kind, "definiteness")->required();
    probe->add_option("input", probe_args.input, "input tensor file")->required();
    probe->add_option("--samples", probe_args.samples, "unit-sphere sample count (default 1000)");
    probe->add_option("--seed", probe_args.seed, "RNG seed")->required();
    probe->add_option("-o,--output", probe_args.output, "witness pair output file");

    RankArgs rank_args;
    CLI::App* rank = app.add_subcommand("rank", "CP rank evidence");
    rank->add_option("kind", rank_args.kind, "estimate|family")->required();
    rank->add_option("inputs", rank_args.inputs, "tensor file (estimate) or vector files (family)")
        ->required();
    rank->add_option("--max-rank", rank_args.max_rank, "largest R to try (default 4)");
    rank->add_option("--restarts", rank_args.restarts, "ALS restarts per R (default 10)");
    rank->add_option("--iters", rank_args.iters, "ALS sweeps per restart (default 400)");
    rank->add_option("--seed", rank_args.seed, "RNG seed (required for estimate)");
    rank->add_option("--fit-tol", rank_args.fit_tol, "relative fit tolerance (default 1e-8)");
    rank->add_option("--tol", rank_args.tol, "rank threshold for family (default 1e-10)");
    rank->add_option("-o,--output", rank_args.output, "evidence table output file (estimate)");

    SubspaceArgs subspace_args;
    CLI::App* subspace = app.add_subcommand("subspace-dim", "dimension of a sigma-(sign-)symmetric subspace");
    subspace->add_option("--dim", subspace_args.dim, "dimension n")->required();
    subspace->add_option("--perm", subspace_args.perm, "permutation image")->required();
    subspace->add_flag("--signed", subspace_args.with_sign, "count the sign-symmetric subspace");

    std::string convert_input, convert_output;
    CLI::App* convert = app.add_subcommand("convert", "re-encode a tensor file (format by extension)");
    convert->add_option("input", convert_input, "input tensor file")->required();
    convert->add_option("output", convert_output, "output tensor file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (make->parsed()) run_make(make_args);
        if (product->parsed()) run_product(product_args);
        if (invert_cmd->parsed()) run_invert(invert_input, invert_output, pivot_tol);
        if (det_cmd->parsed()) run_det(det_input);
        if (unfold_cmd->parsed()) run_unfold(unfold_input, unfold_output);
        if (classify->parsed()) run_classify(classify_args);
        if (decompose->parsed()) run_decompose(decompose_args);
        if (eig->parsed()) {
            if (eig_kind != "sshopm") throw DomainError("eig: unknown kind '" + eig_kind + "'");
            run_eig(eig_args);
        }
        if (probe->parsed()) {
            if (probe_kind != "definiteness") throw DomainError("probe: unknown kind '" + probe_kind + "'");
            run_probe(probe_args);
        }
        if (rank->parsed()) {
            if (rank_args.kind == "estimate" && !rank->count("--seed"))
                throw DomainError("rank estimate: --seed is required");
            run_rank(rank_args);
        }
        if (subspace->parsed()) run_subspace(subspace_args);
        if (convert->parsed()) run_convert(convert_input, convert_output);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const SingularError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const NonConvergence& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
