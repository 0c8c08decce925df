#pragma once

namespace efdvd {

/** Frequency-fitting parameters for the trapezoidal time average.
 *
 * The fitted weight alpha(theta), theta = omega*dt, is chosen so that the
 * one-step relation  alpha*(u(t+dt) - u(t)) = (dt/2)*(u'(t+dt) + u'(t))
 * holds exactly for u in span{1, cos(omega t), sin(omega t)}.  Closed form:
 *
 *   alpha(theta) = theta*(1 + cos theta) / (2 sin theta),   alpha(0) = 1.
 *
 * alpha is even in theta and decreases from 1 to 0 on [0, pi); the first
 * pole of the underlying half-angle cotangent sits at theta = pi, so the
 * constructor rejects omega*dt >= pi.
 */
struct FitParams {
  double omega = 0.0;
  double dt = 0.0;

  FitParams(double omega_, double dt_);  // validates; throws std::domain_error
  double theta() const { return omega * dt; }
};

// Weight as a function of theta alone.  Uses the closed form away from zero
// and the Taylor expansion 1 - theta^2/12 - theta^4/720 for |theta| below
// 1e-4, where the ratio form starts losing digits to cancellation.
double alpha_from_theta(double theta);

double alpha(const FitParams& p);

/** Worst-case fitting residual over the fitted basis at anchor time t.
 *
 * Evaluates |alpha*(u(t+dt) - u(t)) - (dt/2)*(u'(t+dt) + u'(t))| for
 * u = 1, cos(omega s), sin(omega s) and returns the largest value.  Exact
 * fitting means this is zero up to roundoff for every t.
 */
double check_fitting_exactness(const FitParams& p, double t);

}  // namespace efdvd
