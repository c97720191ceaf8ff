"""Sign, phase and branch conventions used throughout the package.

The text below is the single authoritative statement of the conventions.
Its hash is stamped into every CSV emitted by the CLI so datasets can be
matched to the conventions they were produced under.
"""

import hashlib

CONVENTIONS = """\
magnusosc conventions sheet (v1)
================================

Oscillator
----------
* omega^2(t) = omega0^2 + epsilon(t), omega0 > 0, sup|epsilon| < omega0^2.
* eta(t) = epsilon(t) / (2 omega0).  All drives vanish identically outside
  the window [t_min, t_max].
* Phase-space vector (a, a*) with a = (omega0 q + i p) / sqrt(2 omega0);
  i dU/dt = H(t) U,  H = omega0 diag(1entry, -1) + eta(t) [[1, 1], [-1, -1]].

Fourier transforms
------------------
* F(nu) = int dt f(t) exp(-i nu t)   (electrical-engineering sign).
  With this sign the resonant harmonic drive epsilon0 cos(2 omega0 t) has
  epsilon_tilde(2 omega0) = epsilon0 T / 2 + oscillatory remainder > 0.
* Retarded transform: eta_ret(nu; t) = int_{t_min}^{t} eta(tau) e^{-i nu tau} dtau.
  For t >= t_max it equals fourier(epsilon, nu) / (2 omega0).

Interaction picture
-------------------
* U0(t) = diag(exp(-i omega0 t), exp(+i omega0 t)) with absolute time t
  (phases are referenced to t = 0, not to the window edge).
* U_I(t_f, t_i) = U0(t_f)^{-1} U(t_f, t_i) U0(t_i).

Bogoliubov coefficients
-----------------------
* alpha = conj([U_I]_22), beta = [U_I]_21 for the full-window propagator,
  so the leading-order resonant drive gives alpha = cosh|eta_tilde(2 omega0)|
  and beta = i e^{i phi} sinh|eta_tilde(2 omega0)| with
  phi = arg eta_tilde(2 omega0).
* Unitarity: |alpha|^2 - |beta|^2 = 1.

Effective actions
-----------------
* In-out: exp(i Gamma) = ([U_I]_22)^{-1/2}; Im Gamma = (1/2) log|[U_I]_22|,
  Re Gamma = -(1/2) arg [U_I]_22 with the branch fixed by continuity in the
  drive amplitude from the trivial drive (winding recorded when the
  principal branch is crossed).
* Vacuum persistence probability |<0_out|0_in>|^2 = exp(-2 Im Gamma) = 1/|alpha|.
* Closed-time-path: Gamma = (i/2) log(alpha_- conj(alpha_+) - beta_- conj(beta_+)),
  same branch policy.

Branch rule for the effective squeeze argument
----------------------------------------------
* x = sqrt(|eta_tilde(2 omega0)|^2 - |eta_tilde(0)|^2): nonnegative real when
  the radicand is >= 0, else +i sqrt(|radicand|) ("trigonometric branch").
  Every formula uses only even functions of x (cosh x, sinh x / x), so the
  sign choice is unobservable.

Equation of motion
------------------
* The causal source is the functional derivative of the CTP action with
  respect to eta(t) (NOT epsilon(t)); multiply by 1/(2 omega0) to convert
  to a derivative with respect to epsilon(t).
* With n2 = eta_ret(2 omega0; t), n0 = eta_ret(0; t),
  x = sqrt(|n2|^2 - n0^2), E = exp(+2 i omega0 t):

      source(t) = -(1/2) cosh(2x)
                  + [sinh(2x)/(2x)] Im(n2 E)
                  + n0 [(cosh(2x)-1)/(2x^2)] (Re(n2 E) - n0)

  which equals (1/2) [exp(-A) M(t) exp(A)]_22 for
  A = [[-i n0, -i conj(n2)], [i n2, i n0]],
  M(t) = [[1, E], [-conj(E), -1]].
* The drive-independent constant -1/2 is a contact term; it is reported
  as-is, not subtracted.
"""


def conventions_hash() -> str:
    """Short stable hash of the conventions sheet, stamped into CSV output."""
    return hashlib.sha256(CONVENTIONS.encode("utf-8")).hexdigest()[:12]
