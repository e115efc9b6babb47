import init, { spectrum, ground_entanglement, lower_bound_dynamics } from "./pkg/usc_qed_web.js";

const COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];
const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);

// series: [{ xs, ys, color }]
function plot(canvas, series, xlabel) {
  const ctx = canvas.getContext("2d");
  const { width: w, height: h } = canvas;
  const pad = { l: 56, r: 12, t: 12, b: 36 };
  ctx.clearRect(0, 0, w, h);
  const xs = series.flatMap((s) => s.xs);
  const ys = series.flatMap((s) => s.ys);
  const [x0, x1] = [Math.min(...xs), Math.max(...xs)];
  let [y0, y1] = [Math.min(...ys), Math.max(...ys)];
  if (y1 - y0 < 1e-12) { y0 -= 0.5; y1 += 0.5; }
  const X = (x) => pad.l + ((x - x0) / (x1 - x0 || 1)) * (w - pad.l - pad.r);
  const Y = (y) => h - pad.b - ((y - y0) / (y1 - y0)) * (h - pad.t - pad.b);

  ctx.strokeStyle = "#888";
  ctx.fillStyle = "#444";
  ctx.font = "12px sans-serif";
  ctx.strokeRect(pad.l, pad.t, w - pad.l - pad.r, h - pad.t - pad.b);
  for (let i = 0; i <= 4; i++) {
    const xv = x0 + ((x1 - x0) * i) / 4;
    const yv = y0 + ((y1 - y0) * i) / 4;
    ctx.fillText(xv.toPrecision(3), X(xv) - 12, h - pad.b + 16);
    ctx.fillText(yv.toPrecision(3), 4, Y(yv) + 4);
  }
  ctx.fillText(xlabel, w / 2, h - 4);

  for (const s of series) {
    ctx.strokeStyle = s.color;
    ctx.lineWidth = 1.5;
    ctx.beginPath();
    s.xs.forEach((x, i) => (i ? ctx.lineTo(X(x), Y(s.ys[i])) : ctx.moveTo(X(x), Y(s.ys[i]))));
    ctx.stroke();
  }
}

function columns(flat, width) {
  const rows = flat.length / width;
  return Array.from({ length: width }, (_, c) => Array.from({ length: rows }, (_, r) => flat[r * width + c]));
}

function legend(el, names) {
  el.innerHTML = names.map((n, i) => `<span style="color:${COLORS[i]}">■ ${n}</span>`).join("");
}

function guarded(prefix, f) {
  return () => {
    $(prefix + "-err").textContent = "";
    try {
      f();
    } catch (e) {
      $(prefix + "-err").textContent = String(e.message ?? e);
    }
  };
}

const drawSpectrum = guarded("sp", () => {
  const levels = num("sp-levels");
  const cols = columns(spectrum(num("sp-g"), 121, levels, num("sp-d"), $("sp-rwa").checked), levels + 1);
  const series = cols.slice(1).map((ys, i) => ({ xs: cols[0], ys, color: COLORS[i % COLORS.length] }));
  plot($("sp-plot"), series, "g / ω");
});

const drawGround = guarded("ge", () => {
  const cols = columns(ground_entanglement(num("ge-g"), 61, num("ge-d")), 4);
  const names = ["E(ρ_AF) exact", "E(ρ_AF) lower bound", "discord(ρ_AB)"];
  legend($("ge-legend"), names);
  plot($("ge-plot"), names.map((_, i) => ({ xs: cols[0], ys: cols[i + 1], color: COLORS[i] })), "g / ω");
});

const drawDynamics = guarded("dy", () => {
  const flat = lower_bound_dynamics(num("dy-g"), num("dy-k"), num("dy-t"), num("dy-d"), $("dy-diss").value);
  const cols = columns(flat, 3);
  legend($("dy-legend"), ["E_lb(ρ_AF)", "⟨a†a⟩"]);
  plot($("dy-plot"), [
    { xs: cols[0], ys: cols[1], color: COLORS[0] },
    { xs: cols[0], ys: cols[2], color: COLORS[1] },
  ], "ωt");
});

await init();
$("sp-run").onclick = drawSpectrum;
$("ge-run").onclick = drawGround;
$("dy-run").onclick = drawDynamics;
drawSpectrum();
drawGround();
