// Expects the wasm-bindgen `--target web` output in ./pkg/.
import init, { tvProfile, absorptionNearResonance, forceRatios } from "./pkg/neqcp_web.js";

const $ = (id) => document.getElementById(id);
const status = (msg, bad = false) => {
  $("status").textContent = msg;
  $("status").className = bad ? "err" : "";
};

function pairs(flat) {
  const xs = [], ys = [];
  for (let i = 0; i < flat.length; i += 2) { xs.push(flat[i]); ys.push(flat[i + 1]); }
  return [xs, ys];
}

function plot(canvas, xs, ys, { logx = false } = {}) {
  const ctx = canvas.getContext("2d");
  const W = canvas.width, H = canvas.height, pad = 40;
  const tx = xs.map((x) => (logx ? Math.log10(x) : x));
  const [x0, x1] = [Math.min(...tx), Math.max(...tx)];
  let [y0, y1] = [Math.min(...ys), Math.max(...ys)];
  if (y1 === y0) { y0 -= 1; y1 += 1; }
  const sx = (x) => pad + ((x - x0) / (x1 - x0)) * (W - 2 * pad);
  const sy = (y) => H - pad - ((y - y0) / (y1 - y0)) * (H - 2 * pad);
  ctx.clearRect(0, 0, W, H);
  ctx.strokeStyle = "#999";
  ctx.strokeRect(pad, pad, W - 2 * pad, H - 2 * pad);
  ctx.fillStyle = "#444";
  ctx.font = "11px sans-serif";
  ctx.fillText(y1.toPrecision(4), 2, pad + 4);
  ctx.fillText(y0.toPrecision(4), 2, H - pad);
  ctx.fillText(x0.toPrecision(3), pad, H - pad + 14);
  ctx.fillText(x1.toPrecision(3), W - pad - 30, H - pad + 14);
  ctx.strokeStyle = "#1a5fb4";
  ctx.lineWidth = 2;
  ctx.beginPath();
  tx.forEach((x, i) => (i ? ctx.lineTo(sx(x), sy(ys[i])) : ctx.moveTo(sx(x), sy(ys[i]))));
  ctx.stroke();
}

function timed(label, f) {
  status(`${label}…`);
  // let the status repaint before the synchronous computation
  setTimeout(() => {
    const t0 = performance.now();
    try {
      f();
      status(`${label}: ${((performance.now() - t0) / 1000).toFixed(2)} s`);
    } catch (e) {
      status(`${label}: ${e.message ?? e}`, true);
    }
  }, 10);
}

await init();

$("tv-go").onclick = () => timed("T_v profile", () => {
  const [xs, ys] = pairs(tvProfile(+$("tv-beta").value, +$("tv-n").value));
  plot($("tv-plot"), xs, ys, { logx: true });
});

$("ab-go").onclick = () => timed("absorption", () => {
  const [xs, ys] = pairs(absorptionNearResonance(+$("ab-beta").value, +$("ab-span").value, 200));
  plot($("ab-plot"), xs, ys);
});

$("f-go").onclick = () => timed("force", () => {
  const [beta, ds, th, total] = forceRatios(+$("f-ratio").value);
  $("f-out").textContent =
    `v/c          ${beta.toExponential(4)}\n` +
    `F_Ds / F0    ${ds.toFixed(6)}\n` +
    `F_Th / F0    ${th.toFixed(6)}\n` +
    `F_tot / F0   ${total.toFixed(6)}`;
});

status("ready");
