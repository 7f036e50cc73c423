#ifndef HOPF_SPHERE_STATE_HPP_
#define HOPF_SPHERE_STATE_HPP_

#include <functional>
#include <optional>
#include <utility>

#include "hopf/cos_poly.hpp"

namespace hopf {

// Evaluable (r, psi, s) triple at a fixed time.  Coefficient-backed states
// carry the exact polynomials alongside the evaluators; sampled states carry
// only the evaluators.
struct SphereState {
    double time_tag = 0;
    bool convex_known = false;
    bool convex = false;

    std::optional<CosPoly> r_exact, psi_exact, s_exact;

    std::function<double(double)> r_fn, psi_fn, s_fn, dr_fn;

    double r(double theta) const { return r_fn(theta); }
    double psi(double theta) const { return psi_fn(theta); }
    double s(double theta) const { return s_fn(theta); }
    double dr_dtheta(double theta) const { return dr_fn(theta); }

    static SphereState from_polys(CosPoly rp, CosPoly psip, CosPoly sp, double t = 0)
    {
        SphereState st;
        st.time_tag = t;
        CosPoly drp = rp.deriv_theta();
        st.r_fn = [rp](double th) { return rp.eval(th); };
        st.psi_fn = [psip](double th) { return psip.eval(th); };
        st.s_fn = [sp](double th) { return sp.eval(th); };
        st.dr_fn = [drp](double th) { return drp.eval(th); };
        st.r_exact = std::move(rp);
        st.psi_exact = std::move(psip);
        st.s_exact = std::move(sp);
        return st;
    }

    static SphereState from_support(const CosPoly& rp, double t = 0)
    {
        return from_polys(rp, psi_from_r(rp), s_from_r(rp), t);
    }
};

} // namespace hopf

#endif
