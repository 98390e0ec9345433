#include "plots.hpp"

#include <stdexcept>

namespace dicke::app {

namespace {

const char* prelude = R"PY(#!/usr/bin/env python3
# Renders the tables in this directory; needs numpy, pandas and matplotlib.
import json, os, sys
import numpy as np
import pandas as pd
import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

here = os.path.dirname(os.path.abspath(__file__))

def load(name):
    csv = os.path.join(here, name + ".csv")
    if os.path.exists(csv):
        return pd.read_csv(csv)
    with open(os.path.join(here, name + ".json")) as f:
        j = json.load(f)
    return pd.DataFrame(j["rows"], columns=j["columns"])

def grid(df, x, y, z):
    t = df.pivot_table(index=y, columns=x, values=z)
    return t.columns.values, t.index.values, t.values

def save(fig, name):
    fig.tight_layout()
    fig.savefig(os.path.join(here, name + ".png"), dpi=150)
    plt.close(fig)
)PY";

const char* fig1 = R"PY(
fig, ax = plt.subplots(2, 2, figsize=(10, 7))
for col, (re_name, im_name) in enumerate([("fig1a_real", "fig1b_imag"), ("fig1c_real_zoom", "fig1d_imag_zoom")]):
    re, im = load(re_name), load(im_name)
    x = "lambda [omega0]"
    ax[0, col].plot(re[x], re["Re omega_ex [omega0]"], "b-", label="exact")
    ax[0, col].plot(re[x], re["Re omega_ex leading order [omega0]"], "k--", label="leading order")
    ax[1, col].plot(im[x], im["Im omega_ex [omega0]"], "b-")
    ax[1, col].plot(im[x], im["Im omega_ex leading order [omega0]"], "k--")
    ax[0, col].set_ylabel(r"Re $\omega_{ex}/\omega_0$")
    ax[1, col].set_ylabel(r"Im $\omega_{ex}/\omega_0$")
    ax[1, col].set_xlabel(r"$\lambda/\omega_0$")
ax[0, 0].legend()
save(fig, "fig1")
)PY";

const char* fig2 = R"PY(
m = load("fig2a_g2_map")
X, Y, Z = grid(m, "lambda [omega0]", "tau [1/omega0]", "g2 [1]")
fig, ax = plt.subplots(1, 3, figsize=(15, 4.5))
pc = ax[0].pcolormesh(X, Y, Z, shading="auto")
fig.colorbar(pc, ax=ax[0])
ax[0].set_xlabel(r"$\lambda/\omega_0$"); ax[0].set_ylabel(r"$\omega_0\tau$")
f = load("fig2b_fft_map")
X, Y, Z = grid(f, "lambda [omega0]", "nu [omega0]", "log10 |F| [1]")
pc = ax[1].pcolormesh(X, Y, Z, shading="auto")
fig.colorbar(pc, ax=ax[1])
pk = load("fig2b_peaks")
ax[1].plot(pk["lambda [omega0]"], pk["2 omega0 sqrt(1 - lambda^2/lambda_c^2) [omega0]"], "w--", lw=1)
ax[1].set_xlabel(r"$\lambda/\omega_0$"); ax[1].set_ylabel(r"$\nu/\omega_0$")
c = load("fig2c_long_time")
ax[2].plot(c["tau [1/omega0]"], c["g2 [1]"], lw=0.5)
ax[2].set_xlabel(r"$\omega_0\tau$"); ax[2].set_ylabel(r"$g^{(2)}(\tau)$")
save(fig, "fig2")
)PY";

const char* fig3 = R"PY(
d = load("fig3_g2")
lams = sorted(d["lambda [omega0]"].unique())
fig, ax = plt.subplots(len(lams), 1, figsize=(8, 2 * len(lams)), sharex=True)
for a, l in zip(np.atleast_1d(ax), lams):
    s = d[d["lambda [omega0]"] == l]
    a.plot(s["tau [1/omega0]"], s["g2 with field [1]"], "b-")
    a.plot(s["tau [1/omega0]"], s["g2 without field [1]"], "r--")
    a.set_ylabel(r"$g^{(2)}$, $\lambda=%g$" % l)
np.atleast_1d(ax)[-1].set_xlabel(r"$\omega_0\tau$")
save(fig, "fig3")
)PY";

const char* fig4 = R"PY(
b = load("fig4_boundary")
fig, ax = plt.subplots(1, 3, figsize=(15, 4.5))
for a, (name, col) in zip(ax[:2], [("fig4a_alpha2_map", "max |alpha|^2/N [1]"), ("fig4b_rebeta_map", "max Re beta/N [1]")]):
    m = load(name)
    X, Y, Z = grid(m, "lambda/lambda_c [1]", "nu [omega0]", col)
    pc = a.pcolormesh(X, Y, Z, shading="auto")
    fig.colorbar(pc, ax=a)
    a.plot(b["lambda/lambda_c [1]"], b["nu [omega0]"], "r-")
    a.set_xlabel(r"$\lambda/\lambda_c$"); a.set_ylabel(r"$\nu/\omega_0$")
s = load("fig4c_series")
ax[2].plot(s["t [1/omega0]"], s["Re beta/N [1]"], lw=0.5)
ax[2].set_xlabel(r"$\omega_0 t$"); ax[2].set_ylabel(r"Re $\beta/N$")
save(fig, "fig4")
)PY";

const char* fig5 = R"PY(
fig, ax = plt.subplots(2, 2, figsize=(10, 8))
for a, name in zip([ax[0, 0], ax[1, 0], ax[1, 1]],
                   ["fig5a_branches_zero_field", "fig5c_branches_same_sign", "fig5d_branches_opposite_sign"]):
    d = load(name)
    for stab, color in [("stable", "b"), ("unstable", "r"), ("marginal", "g")]:
        s = d[d["stability"] == stab]
        a.plot(s["lambda [omega0]"], s["Re alpha [1]"], color + ".", ms=2)
    a.set_xlabel(r"$\lambda/\omega_0$"); a.set_ylabel(r"Re $\alpha$"); a.set_title(name)
d = load("fig5b_density")
for (lp, s), style in zip(d.groupby("lambda_prime [omega0]"), ["r--", "b-"]):
    ax[0, 1].plot(s["x [lambda_p]"], s["density [atoms/lambda_p]"], style, label=r"$\lambda'=%.4g$" % lp)
ax[0, 1].set_xlabel(r"$x/\lambda_p$"); ax[0, 1].set_ylabel("density"); ax[0, 1].legend()
save(fig, "fig5")
)PY";

} // namespace

std::string figure_plot_script(const std::string& figure_id) {
    const char* body = nullptr;
    if (figure_id == "fig1") body = fig1;
    else if (figure_id == "fig2") body = fig2;
    else if (figure_id == "fig3") body = fig3;
    else if (figure_id == "fig4") body = fig4;
    else if (figure_id == "fig5") body = fig5;
    else throw std::invalid_argument("figure_plot_script: unknown figure '" + figure_id + "'");
    return std::string(prelude) + body;
}

std::string generic_plot_script(const std::vector<std::string>& csv_files) {
    std::string s = prelude;
    s += "\nfor name in [";
    for (std::size_t i = 0; i < csv_files.size(); ++i) {
        if (i) s += ", ";
        s += "\"" + csv_files[i] + "\"";
    }
    s += R"PY(]:
    d = load(name)
    num = d.select_dtypes("number")
    if num.shape[1] < 2:
        continue
    fig, ax = plt.subplots(figsize=(8, 5))
    for c in num.columns[1:]:
        ax.plot(num.iloc[:, 0], num[c], ".-", ms=2, label=c)
    ax.set_xlabel(num.columns[0]); ax.legend(fontsize=7)
    save(fig, name)
)PY";
    return s;
}

} // namespace dicke::app
