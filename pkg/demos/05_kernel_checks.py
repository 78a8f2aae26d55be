"""Run the analytic-kernel verification suite and print one line per check.

Covers the smoothing-kernel series identity and normalization, the arctan
Fourier transform against direct quadrature (including the numerator
discrepancy, resolved in favor of the displayed equation), the
term-sign table, the telescoping commutator identity and the coupling
scaling constant.
"""

import floquet_lab as fl

reports = fl.run_all_checks()
width = max(len(r.name) for r in reports)
for r in reports:
    status = "PASS" if r.passed else "FAIL"
    extra = ""
    if r.max_abs_error is not None:
        extra += f"  max_err={r.max_abs_error:.2e}"
    if r.min_value is not None:
        extra += f"  min={r.min_value:.2e}"
    print(f"{r.name:<{width}}  {status}{extra}")

disc = next(r for r in reports if r.name == "fourier-numerator-discrepancy")
print(f"\nquadrature-selected numerator variant: {disc.details['selected_variant']}")
print(f"  equation-variant max error: {disc.details['max_err_equation']:.2e}")
print(f"  table-variant    max error: {disc.details['max_err_table']:.2e}")
print(f"all passed: {all(r.passed for r in reports)}")
