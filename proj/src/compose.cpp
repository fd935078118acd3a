#include "deltaiss/compose.hpp"

#include "deltaiss/error.hpp"

#include <algorithm>

namespace deltaiss::compose {

namespace {

bool strictly_proper(const GenericRnn& sys) { return sys.d.max_abs() == 0.0; }

std::vector<Activation> concat(const std::vector<Activation>& a, const std::vector<Activation>& b) {
    std::vector<Activation> out = a;
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

GenericRnn series_pair(const GenericRnn& first, const GenericRnn& second, std::size_t index) {
    if (second.input_dim() != first.output_dim())
        fail(ErrorKind::Dimension,
             "series: output of system " + std::to_string(index) + " (" +
                 std::to_string(first.output_dim()) + ") does not match input of system " +
                 std::to_string(index + 1) + " (" + std::to_string(second.input_dim()) + ")");

    const std::size_t n1 = first.state_dim();
    const std::size_t n2 = second.state_dim();
    GenericRnn out;
    out.a = DenseMatrix(n1 + n2, n1 + n2);
    out.a.set_block(0, 0, first.a);
    out.a.set_block(n1, 0, second.b * first.c);
    out.a.set_block(n1, n1, second.a);
    out.b = DenseMatrix(n1 + n2, first.input_dim());
    out.b.set_block(0, 0, first.b);
    out.b.set_block(n1, 0, second.b * first.d);
    out.c = DenseMatrix(second.output_dim(), n1 + n2);
    out.c.set_block(0, 0, second.d * first.c);
    out.c.set_block(0, n1, second.c);
    out.d = second.d * first.d;
    out.activations = concat(first.activations, second.activations);
    return out;
}

} // namespace

GenericRnn series(const std::vector<GenericRnn>& systems) {
    if (systems.empty())
        fail(ErrorKind::InvalidInput, "series: need at least one system");
    GenericRnn composite = systems.front();
    for (std::size_t i = 1; i < systems.size(); ++i)
        composite = series_pair(composite, systems[i], i);
    return composite;
}

GenericRnn feedback(const GenericRnn& controller, const GenericRnn& plant,
                    bool allow_proper_plant) {
    if (plant.input_dim() != controller.output_dim() ||
        controller.input_dim() != plant.output_dim())
        fail(ErrorKind::Dimension, "feedback: controller/plant dimensions do not chain");

    const std::size_t nc = controller.state_dim();
    const std::size_t ns = plant.state_dim();
    const std::size_t ls = plant.output_dim();
    GenericRnn out;
    out.activations = concat(controller.activations, plant.activations);
    out.c = DenseMatrix(ls, nc + ns);
    out.d = DenseMatrix(ls, ls);
    out.a = DenseMatrix(nc + ns, nc + ns);
    out.b = DenseMatrix(nc + ns, ls);

    if (strictly_proper(plant)) {
        out.a.set_block(0, 0, controller.a);
        out.a.set_block(0, nc, -(controller.b * plant.c));
        out.a.set_block(nc, 0, plant.b * controller.c);
        out.a.set_block(nc, nc, plant.a - plant.b * controller.d * plant.c);
        out.b.set_block(0, 0, controller.b);
        out.b.set_block(nc, 0, plant.b * controller.d);
        out.c.set_block(0, nc, plant.c);
        return out;
    }
    if (!allow_proper_plant)
        fail(ErrorKind::InvalidInput,
             "feedback: plant is not strictly proper (algebraic loop); "
             "use the strictly-proper-controller variant explicitly");
    if (!strictly_proper(controller))
        fail(ErrorKind::InvalidInput,
             "feedback: a proper plant requires a strictly proper controller");

    // Dual arrangement: the controller breaks the loop instead of the plant.
    out.a.set_block(0, 0, controller.a - controller.b * plant.d * controller.c);
    out.a.set_block(0, nc, -(controller.b * plant.c));
    out.a.set_block(nc, 0, plant.b * controller.c);
    out.a.set_block(nc, nc, plant.a);
    out.b.set_block(0, 0, controller.b);
    out.c.set_block(0, 0, plant.d * controller.c);
    out.c.set_block(0, nc, plant.c);
    return out;
}

SisIntSystem integrator_state_feedback(const GenericRnn& plant, const DenseMatrix& k_gain,
                                       const DenseMatrix& m_gain) {
    const std::size_t ns = plant.state_dim();
    const std::size_t ms = plant.input_dim();
    const std::size_t ls = plant.output_dim();
    if (!strictly_proper(plant))
        fail(ErrorKind::InvalidInput, "integrator schemes need a strictly proper plant");
    if (ms != ls)
        fail(ErrorKind::Dimension, "state-feedback integrator scheme needs m = l on the plant");
    if (k_gain.rows() != ms || k_gain.cols() != ns || m_gain.rows() != ls || m_gain.cols() != ls)
        fail(ErrorKind::Dimension, "integrator_state_feedback: gain shape mismatch");

    SisIntSystem s;
    s.a_chi = plant.a + plant.b * k_gain - plant.b * m_gain * plant.c;
    s.a_eta = plant.b * m_gain;
    s.b_chi = s.a_eta;
    s.c_chi = plant.c;
    s.chi_activations = plant.activations;
    return s;
}

SisIntSystem integrator_series_controller(const GenericRnn& controller, const GenericRnn& plant,
                                          const DenseMatrix& m_gain) {
    const std::size_t nc = controller.state_dim();
    const std::size_t ns = plant.state_dim();
    const std::size_t ls = plant.output_dim();
    if (!strictly_proper(plant))
        fail(ErrorKind::InvalidInput, "integrator schemes need a strictly proper plant");
    if (controller.input_dim() != ls || plant.input_dim() != controller.output_dim())
        fail(ErrorKind::Dimension, "integrator_series_controller: dimensions do not chain");
    if (m_gain.rows() != ls || m_gain.cols() != ls)
        fail(ErrorKind::Dimension, "integrator gain must be l x l");

    SisIntSystem s;
    s.a_chi = DenseMatrix(nc + ns, nc + ns);
    s.a_chi.set_block(0, 0, controller.a);
    s.a_chi.set_block(0, nc, -(controller.b * m_gain * plant.c));
    s.a_chi.set_block(nc, 0, plant.b * controller.c);
    s.a_chi.set_block(nc, nc, plant.a - plant.b * controller.d * m_gain * plant.c);
    s.a_eta = DenseMatrix(nc + ns, ls);
    s.a_eta.set_block(0, 0, controller.b * m_gain);
    s.a_eta.set_block(nc, 0, plant.b * controller.d * m_gain);
    s.b_chi = s.a_eta;
    s.c_chi = DenseMatrix(ls, nc + ns);
    s.c_chi.set_block(0, nc, plant.c);
    s.chi_activations = concat(controller.activations, plant.activations);
    return s;
}

SisIntSystem integrator_parallel_controller(const GenericRnn& controller, const GenericRnn& plant,
                                            const DenseMatrix& m_gain) {
    const std::size_t nc = controller.state_dim();
    const std::size_t ns = plant.state_dim();
    const std::size_t ls = plant.output_dim();
    if (!strictly_proper(plant))
        fail(ErrorKind::InvalidInput, "integrator schemes need a strictly proper plant");
    if (controller.input_dim() != ls || plant.input_dim() != controller.output_dim() ||
        plant.input_dim() != ls)
        fail(ErrorKind::Dimension, "integrator_parallel_controller: dimensions do not chain");
    if (m_gain.rows() != ls || m_gain.cols() != ls)
        fail(ErrorKind::Dimension, "integrator gain must be l x l");

    SisIntSystem s;
    s.a_chi = DenseMatrix(nc + ns, nc + ns);
    s.a_chi.set_block(0, 0, controller.a);
    s.a_chi.set_block(0, nc, -(controller.b * plant.c));
    s.a_chi.set_block(nc, 0, plant.b * controller.c);
    s.a_chi.set_block(nc, nc,
                      plant.a - plant.b * m_gain * plant.c - plant.b * controller.d * plant.c);
    s.a_eta = DenseMatrix(nc + ns, ls);
    s.a_eta.set_block(nc, 0, plant.b * m_gain);
    s.b_chi = DenseMatrix(nc + ns, ls);
    s.b_chi.set_block(0, 0, controller.b);
    s.b_chi.set_block(nc, 0, plant.b * m_gain + plant.b * controller.d);
    s.c_chi = DenseMatrix(ls, nc + ns);
    s.c_chi.set_block(0, nc, plant.c);
    s.chi_activations = concat(controller.activations, plant.activations);
    return s;
}

GenericRnn lift_sisint(const SisIntSystem& s) {
    const std::size_t nx = s.chi_dim();
    const std::size_t l = s.output_dim();
    GenericRnn g;
    g.a = DenseMatrix(nx + l, nx + l);
    g.a.set_block(0, 0, s.a_chi);
    g.a.set_block(0, nx, s.a_eta);
    g.a.set_block(nx, 0, -s.c_chi);
    g.a.set_block(nx, nx, DenseMatrix::identity(l));
    g.b = DenseMatrix(nx + l, l);
    g.b.set_block(0, 0, s.b_chi);
    g.b.set_block(nx, 0, DenseMatrix::identity(l));
    g.c = DenseMatrix(l, nx + l);
    g.c.set_block(0, 0, s.c_chi);
    g.d = DenseMatrix(l, l);
    g.activations = s.chi_activations;
    for (std::size_t i = 0; i < l; ++i) g.activations.push_back(Activation::identity());
    return g;
}

BoundedOutputReport bounded_output_precheck(const SisIntSystem& s) {
    BoundedOutputReport report;
    for (std::size_t i = 0; i < s.c_chi.rows(); ++i) {
        bool bounded = true;
        for (std::size_t j = 0; j < s.c_chi.cols(); ++j) {
            if (s.c_chi(i, j) != 0.0 && !s.chi_activations[j].bounded) {
                bounded = false;
                break;
            }
        }
        if (bounded) report.bounded_rows.push_back(i);
    }
    return report;
}

DenseMatrix GainFactorization::reconstruct_a(const DenseMatrix& j) const {
    if (j.rows() != j_rows || j.cols() != j_cols)
        fail(ErrorKind::Dimension, "reconstruct_a: gain shape mismatch");
    return side == GainSide::Right ? f + g * j : f + j * g;
}

GenericRnn GainFactorization::closed_loop(const DenseMatrix& j) const {
    GenericRnn loop;
    loop.a = reconstruct_a(j);
    loop.b = b;
    loop.c = c;
    loop.d = d;
    loop.activations = activations;
    return loop;
}

namespace {

std::vector<std::uint8_t> full_mask(std::size_t rows, std::size_t cols, std::uint8_t value) {
    return std::vector<std::uint8_t>(rows * cols, value);
}

sdp::SparsityPattern theorem2_pattern(const std::vector<Activation>& activations) {
    std::vector<bool> zero_rows(activations.size());
    for (std::size_t i = 0; i < activations.size(); ++i)
        zero_rows[i] = !activations[i].is_identity();
    return sdp::SparsityPattern::with_zero_rows(activations.size(), zero_rows);
}

} // namespace

GainFactorization factorize_state_feedback(const GenericRnn& plant) {
    if (!strictly_proper(plant))
        fail(ErrorKind::InvalidInput, "state feedback factorization needs a strictly proper plant");
    const std::size_t ns = plant.state_dim();
    const std::size_t ms = plant.input_dim();

    GainFactorization fac;
    fac.side = GainSide::Right;
    fac.f = plant.a;
    fac.g = plant.b;
    fac.j_rows = ms;
    fac.j_cols = ns;
    fac.activations = plant.activations;
    fac.p_pattern = theorem2_pattern(fac.activations);
    fac.b = plant.b;
    fac.c = plant.c;
    fac.d = DenseMatrix(plant.output_dim(), ms);
    fac.slots = {{"K", 0, ms, 0, ns}};
    return fac;
}

GainFactorization factorize_esn_output_feedback(const EsnControllerSkeleton& controller,
                                                const GenericRnn& plant) {
    if (!strictly_proper(plant))
        fail(ErrorKind::InvalidInput, "ESN output feedback needs a strictly proper plant");
    const std::size_t nc = controller.w_x.rows();
    const std::size_t ns = plant.state_dim();
    const std::size_t ls = plant.output_dim();
    const std::size_t lc = plant.input_dim(); // controller output drives the plant
    if (controller.w_x.cols() != nc || controller.w_e.rows() != nc ||
        controller.w_e.cols() != ls || controller.w_y.rows() != nc || controller.w_y.cols() != lc)
        fail(ErrorKind::Dimension, "factorize_esn_output_feedback: skeleton shapes mismatch");

    const std::size_t n = nc + ns;
    GainFactorization fac;
    fac.side = GainSide::Right;
    fac.f = DenseMatrix(n, n);
    fac.f.set_block(0, 0, controller.w_x);
    fac.f.set_block(0, nc, -(controller.w_e * plant.c));
    fac.f.set_block(nc, nc, plant.a);
    fac.g = DenseMatrix(n, lc);
    fac.g.set_block(0, 0, controller.w_y);
    fac.g.set_block(nc, 0, plant.b);
    fac.j_rows = lc;
    fac.j_cols = n;
    fac.j_mask = full_mask(lc, n, 0);
    for (std::size_t i = 0; i < lc; ++i)
        for (std::size_t j = 0; j < nc; ++j) fac.j_mask[i * n + j] = 1; // J = [W_out1c 0]
    fac.h_mask = fac.j_mask;
    fac.activations.assign(nc, controller.activation);
    fac.activations.insert(fac.activations.end(), plant.activations.begin(),
                           plant.activations.end());
    fac.p_pattern = theorem2_pattern(fac.activations);
    fac.b = DenseMatrix(n, ls);
    fac.b.set_block(0, 0, controller.w_e);
    fac.c = DenseMatrix(ls, n);
    fac.c.set_block(0, nc, plant.c);
    fac.d = DenseMatrix(ls, ls);
    fac.slots = {{"W_out1c", 0, lc, 0, nc}};
    return fac;
}

GainFactorization factorize_nnarx_output_feedback(const NnarxControllerSkeleton& controller,
                                                  const GenericRnn& plant) {
    if (!strictly_proper(plant))
        fail(ErrorKind::InvalidInput, "NNARX output feedback needs a strictly proper plant");
    const std::size_t ns = plant.state_dim();
    const std::size_t ls = plant.output_dim();
    const std::size_t mc = ls;                    // controller input is the error
    const std::size_t lc = plant.input_dim();     // controller output drives the plant
    const std::size_t nuc = controller.w_0.cols();
    const std::size_t lags = controller.lag_count;
    if (controller.w_0.rows() != lc)
        fail(ErrorKind::Dimension, "factorize_nnarx_output_feedback: W_0 row count mismatch");
    if (lags < 1)
        fail(ErrorKind::InvalidInput, "factorize_nnarx_output_feedback: need at least one lag");

    // Known part of the controller: its lifted form with the unknowns zeroed.
    models::ShallowNnarx skeleton;
    skeleton.w_0 = controller.w_0;
    skeleton.b_0 = DenseMatrix(lc, 1);
    skeleton.w_phi = DenseMatrix(nuc, (lc + mc) * lags);
    skeleton.w_u = DenseMatrix(nuc, mc);
    skeleton.b = DenseMatrix(nuc, 1);
    skeleton.lag_count = lags;
    skeleton.hidden_activation = controller.activation;
    const GenericRnn ctrl_known = models::nnarx_to_generic(skeleton);

    const std::size_t ncs = ctrl_known.state_dim(); // nu_c + (l_c+m_c)N_c - l_c
    const std::size_t reg = ncs - nuc;              // shift-register length
    const DenseMatrix a_c_known = ctrl_known.a;
    const DenseMatrix b_c_known = ctrl_known.b.block(0, 0, ncs, mc);
    const DenseMatrix c_c = ctrl_known.c;

    const std::size_t n = ns + ncs;
    const std::size_t jq = (mc + lc) * lags + mc; // columns of G, width of J
    GainFactorization fac;
    fac.side = GainSide::Left;
    fac.f = DenseMatrix(n, n);
    fac.f.set_block(0, 0, plant.a);
    fac.f.set_block(0, ns, plant.b * c_c);
    fac.f.set_block(ns, 0, -(b_c_known * plant.c));
    fac.f.set_block(ns, ns, a_c_known);
    fac.g = DenseMatrix(jq, n);
    fac.g.set_block(0, 0, -plant.c);
    fac.g.set_block(mc, ns, DenseMatrix::identity(reg)); // register part of the regressor
    fac.g.set_block(mc + reg, ns + reg, controller.w_0); // current output enters via W_0
    fac.j_rows = n;
    fac.j_cols = jq;
    fac.j_mask = full_mask(n, jq, 0);
    for (std::size_t i = ns + reg; i < n; ++i)
        for (std::size_t j = 0; j < jq; ++j) fac.j_mask[i * jq + j] = 1; // J = [0; W_uc W_phic]
    fac.h_mask = fac.j_mask;
    fac.activations = plant.activations;
    fac.activations.insert(fac.activations.end(), ctrl_known.activations.begin(),
                           ctrl_known.activations.end());
    fac.p_pattern = theorem2_pattern(fac.activations);
    fac.b = DenseMatrix(n, ls);
    fac.b.set_block(ns, 0, b_c_known); // J = 0 instantiation: W_uc also enters B
    fac.c = DenseMatrix(ls, n);
    fac.c.set_block(0, 0, plant.c);
    fac.d = DenseMatrix(ls, ls);
    fac.slots = {{"W_uc", ns + reg, n, 0, mc}, {"W_phic", ns + reg, n, mc, jq}};
    return fac;
}

GainFactorization factorize_integrator_state_feedback(const GenericRnn& plant) {
    if (!strictly_proper(plant))
        fail(ErrorKind::InvalidInput, "integrator schemes need a strictly proper plant");
    const std::size_t ns = plant.state_dim();
    const std::size_t ms = plant.input_dim();
    const std::size_t ls = plant.output_dim();
    if (ms != ls)
        fail(ErrorKind::Dimension, "state-feedback integrator scheme needs m = l on the plant");

    const std::size_t n = ns + ls;
    GainFactorization fac;
    fac.side = GainSide::Right;
    fac.f = DenseMatrix(n, n);
    fac.f.set_block(0, 0, plant.a);
    fac.f.set_block(ns, 0, -plant.c);
    fac.f.set_block(ns, ns, DenseMatrix::identity(ls));
    fac.g = DenseMatrix(n, ms);
    fac.g.set_block(0, 0, plant.b);
    fac.j_rows = ms;
    fac.j_cols = n;
    fac.activations = plant.activations;
    for (std::size_t i = 0; i < ls; ++i) fac.activations.push_back(Activation::identity());
    fac.p_pattern = theorem2_pattern(fac.activations);
    fac.b = DenseMatrix(n, ls); // J = 0 instantiation (B_chi = B M vanishes)
    fac.b.set_block(ns, 0, DenseMatrix::identity(ls));
    fac.c = DenseMatrix(ls, n);
    fac.c.set_block(0, 0, plant.c);
    fac.d = DenseMatrix(ls, ls);

    DenseMatrix e(n, n);
    e.set_block(0, 0, DenseMatrix::identity(ns));
    e.set_block(ns, 0, -plant.c);
    e.set_block(ns, ns, DenseMatrix::identity(ls));
    fac.e = e;
    fac.slots = {{"K", 0, ms, 0, ns}, {"M", 0, ms, ns, n}};

    SisIntSystem structure;
    structure.a_chi = plant.a;
    structure.a_eta = DenseMatrix(ns, ls);
    structure.b_chi = DenseMatrix(ns, ls);
    structure.c_chi = plant.c;
    structure.chi_activations = plant.activations;
    fac.integral_structure = std::move(structure);
    return fac;
}

GainFactorization factorize_esn_integrator(const EsnIntegratorSkeleton& controller,
                                           const models::Esn& plant) {
    const std::size_t ns = plant.reservoir_dim();
    const std::size_t nc = controller.w_x.rows();
    if (plant.output_dim() != 1 || plant.input_dim() != 1)
        fail(ErrorKind::Unsupported, "the ESN-with-integrator architecture is built for SISO loops");
    if (plant.w_out2.max_abs() != 0.0)
        fail(ErrorKind::InvalidInput, "plant readout must have no direct input term here");
    if (controller.w_x.cols() != nc || controller.w_u_v.rows() != nc ||
        controller.w_u_v.cols() != 1 || controller.w_u_x.rows() != nc ||
        controller.w_u_x.cols() != ns || controller.w_y.rows() != nc || controller.w_y.cols() != 1)
        fail(ErrorKind::Dimension, "factorize_esn_integrator: skeleton shapes mismatch");

    const DenseMatrix plant_recurrent = plant.effective_recurrent();
    const std::vector<Activation> plant_acts = plant.reservoir_activations();

    // State order [x_c; eta; x_s].
    const std::size_t n = nc + 1 + ns;
    GainFactorization fac;
    fac.side = GainSide::Right;
    fac.f = DenseMatrix(n, n);
    fac.f.set_block(0, 0, controller.w_x);
    fac.f.set_block(0, nc, controller.w_u_v);
    fac.f.set_block(0, nc + 1, controller.w_u_x);
    fac.f(nc, nc) = 1.0;
    fac.f.set_block(nc, nc + 1, -plant.w_out1);
    fac.f.set_block(nc + 1, nc + 1, plant_recurrent);
    fac.g = DenseMatrix(n, 1);
    fac.g.set_block(0, 0, controller.w_y);
    fac.g.set_block(nc + 1, 0, plant.w_u);
    fac.j_rows = 1;
    fac.j_cols = n;
    fac.activations.assign(nc, controller.activation);
    fac.activations.push_back(Activation::identity());
    fac.activations.insert(fac.activations.end(), plant_acts.begin(), plant_acts.end());
    fac.p_pattern = theorem2_pattern(fac.activations);

    fac.b = DenseMatrix(n, 1); // J = 0 instantiation
    fac.b.set_block(0, 0, controller.w_u_v);
    fac.b(nc, 0) = 1.0;
    fac.c = DenseMatrix(1, n);
    fac.c.set_block(0, nc + 1, plant.w_out1);
    fac.d = DenseMatrix(1, 1);

    DenseMatrix e(n, n);
    e.set_block(0, 0, DenseMatrix::identity(nc));
    e(nc, nc) = 1.0;
    e.set_block(nc, nc + 1, -plant.w_out1);
    e.set_block(nc + 1, nc + 1, DenseMatrix::identity(ns));
    fac.e = e;
    fac.slots = {{"W_out1c", 0, 1, 0, nc},
                 {"W_out2cv", 0, 1, nc, nc + 1},
                 {"W_out2cx", 0, 1, nc + 1, n}};

    // chi = [x_c; x_s] with J = 0: the controller output vanishes and only
    // the integrator channel v = eta + r - y feeds x_c.
    SisIntSystem structure;
    structure.a_chi = DenseMatrix(nc + ns, nc + ns);
    structure.a_chi.set_block(0, 0, controller.w_x);
    structure.a_chi.set_block(0, nc, controller.w_u_x - controller.w_u_v * plant.w_out1);
    structure.a_chi.set_block(nc, nc, plant_recurrent);
    structure.a_eta = DenseMatrix(nc + ns, 1);
    structure.a_eta.set_block(0, 0, controller.w_u_v);
    structure.b_chi = structure.a_eta;
    structure.c_chi = DenseMatrix(1, nc + ns);
    structure.c_chi.set_block(0, nc, plant.w_out1);
    structure.chi_activations.assign(nc, controller.activation);
    structure.chi_activations.insert(structure.chi_activations.end(), plant_acts.begin(),
                                     plant_acts.end());
    fac.integral_structure = std::move(structure);
    return fac;
}

GenericRnn esn_integrator_loop(const EsnIntegratorSkeleton& controller, const models::Esn& plant,
                               const DenseMatrix& w_out1c, const DenseMatrix& w_out2c) {
    const std::size_t ns = plant.reservoir_dim();
    const std::size_t nc = controller.w_x.rows();
    if (w_out1c.rows() != 1 || w_out1c.cols() != nc || w_out2c.rows() != 1 ||
        w_out2c.cols() != 1 + ns)
        fail(ErrorKind::Dimension, "esn_integrator_loop: readout shape mismatch");

    const DenseMatrix w_out2cv = w_out2c.block(0, 0, 1, 1);
    const DenseMatrix w_out2cx = w_out2c.block(0, 1, 1, ns);
    const DenseMatrix coupling = w_out2cx - w_out2cv * plant.w_out1; // x_s path through y_c

    const std::size_t n = nc + 1 + ns;
    GenericRnn loop;
    loop.a = DenseMatrix(n, n);
    loop.a.set_block(0, 0, controller.w_x + controller.w_y * w_out1c);
    loop.a.set_block(0, nc, controller.w_u_v + controller.w_y * w_out2cv);
    loop.a.set_block(0, nc + 1, controller.w_u_x + controller.w_y * coupling);
    loop.a(nc, nc) = 1.0;
    loop.a.set_block(nc, nc + 1, -plant.w_out1);
    loop.a.set_block(nc + 1, 0, plant.w_u * w_out1c);
    loop.a.set_block(nc + 1, nc, plant.w_u * w_out2cv);
    loop.a.set_block(nc + 1, nc + 1, plant.effective_recurrent() + plant.w_u * coupling);
    loop.b = DenseMatrix(n, 1);
    loop.b.set_block(0, 0, controller.w_u_v + controller.w_y * w_out2cv);
    loop.b(nc, 0) = 1.0;
    loop.b.set_block(nc + 1, 0, plant.w_u * w_out2cv);
    loop.c = DenseMatrix(1, n);
    loop.c.set_block(0, nc + 1, plant.w_out1);
    loop.d = DenseMatrix(1, 1);
    loop.activations.assign(nc, controller.activation);
    loop.activations.push_back(Activation::identity());
    const auto plant_acts = plant.reservoir_activations();
    loop.activations.insert(loop.activations.end(), plant_acts.begin(), plant_acts.end());
    return loop;
}

} // namespace deltaiss::compose
