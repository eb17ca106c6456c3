import init, { regular, delta_line, embed } from "./pkg/torus_embed_wasm.js";

const COLORS = ["#d1495b", "#00798c", "#edae49", "#30638e", "#6a4c93", "#2a9d8f", "#e76f51", "#8d99ae"];
const $ = (id) => document.getElementById(id);
const fmt = (x) => (x === null || x === undefined ? "-" : Math.abs(x) >= 1e4 || (x !== 0 && Math.abs(x) < 1e-3) ? x.toExponential(3) : x.toPrecision(6));
const short = (digits) => (digits.length > 20 ? `${digits.slice(0, 6)}...${digits.slice(-6)} (${digits.length} digits)` : digits);

function escapeHtml(s) {
  return String(s).replace(/[&<>"]/g, (c) => ({ "&": "&amp;", "<": "&lt;", ">": "&gt;", '"': "&quot;" })[c]);
}

function showError(out, canvas, err) {
  out.innerHTML = `<p class="error">${escapeHtml(err.message ?? err)}</p>`;
  canvas.getContext("2d").clearRect(0, 0, canvas.width, canvas.height);
}

// Draws one polygon factor in a square cell; stacked marks are fanned out so
// points sharing a vertex stay visible.
function drawFactor(ctx, factor, cx, cy, size, label) {
  const scale = (size * 0.42) / factor.r;
  ctx.strokeStyle = "#9aa3b5";
  ctx.lineWidth = 1;
  ctx.beginPath();
  if (factor.outline) {
    factor.outline.forEach(([x, y], k) => (k ? ctx.lineTo : ctx.moveTo).call(ctx, cx + x * scale, cy - y * scale));
    ctx.closePath();
  } else {
    ctx.arc(cx, cy, factor.r * scale, 0, 2 * Math.PI);
  }
  ctx.stroke();
  if (factor.outline && factor.outline.length <= 64) {
    ctx.fillStyle = "#9aa3b5";
    for (const [x, y] of factor.outline) {
      ctx.beginPath();
      ctx.arc(cx + x * scale, cy - y * scale, 2, 0, 2 * Math.PI);
      ctx.fill();
    }
  }
  const seen = new Map();
  for (const mark of factor.marks) {
    const key = mark.index;
    const stack = seen.get(key) ?? 0;
    seen.set(key, stack + 1);
    const px = cx + mark.x * scale;
    const py = cy - mark.y * scale;
    const nx = mark.x / factor.r;
    const ny = -mark.y / factor.r;
    ctx.fillStyle = COLORS[mark.point % COLORS.length];
    ctx.beginPath();
    ctx.arc(px + nx * stack * 9, py + ny * stack * 9, 5, 0, 2 * Math.PI);
    ctx.fill();
  }
  ctx.fillStyle = "#1d2330";
  ctx.font = "12px system-ui";
  ctx.textAlign = "center";
  ctx.fillText(label, cx, cy + size / 2 - 2);
}

function drawGrid(canvas, factors, labelOf) {
  const ctx = canvas.getContext("2d");
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  if (!factors.length) return;
  const per = Math.min(factors.length, Math.max(1, Math.floor(canvas.width / 150)));
  const size = Math.min(canvas.width / per, 220);
  const rows = Math.ceil(factors.length / per);
  canvas.height = rows * size;
  factors.forEach((f, k) => {
    const cx = (k % per) * size + size / 2;
    const cy = Math.floor(k / per) * size + size / 2 - 8;
    drawFactor(ctx, f, cx, cy, size, labelOf(f, k));
  });
}

function legend(n) {
  return Array.from({ length: n }, (_, i) => `<span style="color:${COLORS[i % COLORS.length]}">&#9679;</span> ${i}`).join(" &nbsp;");
}

function runRegular() {
  const out = $("reg-out");
  const canvas = $("reg-canvas");
  try {
    const v = JSON.parse(regular(Number($("reg-n").value), Number($("reg-alpha").value), Number($("reg-m").value)));
    const f = v.factors[0];
    out.innerHTML = `<p>${v.factors.length} factors, each a regular ${f.m}-gon of side ${fmt(f.side)} and circumradius ${fmt(f.r)}.
      Every pairwise torus distance equals &alpha; = ${fmt(v.alpha)} (max relative error ${fmt(v.max_rel_error)}).</p><p>${legend(v.factors.length)}</p>`;
    drawGrid(canvas, v.factors, (_, k) => `factor ${k}`);
  } catch (err) {
    showError(out, canvas, err);
  }
}

function runLine() {
  const out = $("line-out");
  const canvas = $("line-canvas");
  try {
    const v = JSON.parse(delta_line($("line-xs").value, Number($("line-delta").value)));
    const xs = JSON.parse($("line-xs").value);
    const rows = v.factor.marks
      .map((mk, i) => `<tr><td>${fmt(xs[i])}</td><td>${fmt(v.snapped[i])}</td><td>${short(mk.index)}</td></tr>`)
      .join("");
    out.innerHTML = `<p>n0 = ${v.n0}, n = ${short(v.n)}, m = n&sup3; = ${short(v.factor.m)} (${v.factor.m_bits} bits), r = ${fmt(v.factor.r)}.
      Largest squared-distance error ${fmt(v.max_error)} &lt; &delta; = ${fmt(v.delta)}.</p>
      <pre><table><tr><th>x</th><th>snapped</th><th>vertex</th></tr>${rows}</table></pre>`;
    drawGrid(canvas, [v.factor], (f) => (f.outline ? `${f.m}-gon` : `${short(f.m)}-gon (outline omitted)`));
  } catch (err) {
    showError(out, canvas, err);
  }
}

function runEmbed() {
  const out = $("embed-out");
  const canvas = $("embed-canvas");
  const link = $("embed-download");
  try {
    const v = JSON.parse(embed($("embed-input").value, $("embed-uniform").checked));
    const orders = v.orders.map((o) => `${o.factors} &times; m = ${short(o.m)} (${o.bits} bits)`).join("<br>");
    out.innerHTML = `<p>${v.points} points on ${v.factors} polygon factors (ambient dimension ${v.ambient_dim}).
      &alpha; = ${fmt(v.alpha)}, &delta; = ${fmt(v.delta)}; the first ${v.delta_factor_count} factors carry the approximate embedding.</p>
      <p>${orders}</p>
      <p>Max squared-distance error: ${fmt(v.max_abs)} absolute, ${fmt(v.max_rel)} relative (tolerance ${fmt(v.accept_tol)}).</p>
      <p>${legend(v.points)}</p>`;
    drawGrid(canvas, v.drawn, (f) => `factor ${f.slot}, side ${fmt(f.side)}`);
    URL.revokeObjectURL(link.href);
    link.href = URL.createObjectURL(new Blob([v.certificate], { type: "application/json" }));
    link.hidden = false;
  } catch (err) {
    link.hidden = true;
    showError(out, canvas, err);
  }
}

await init();
$("reg-run").addEventListener("click", runRegular);
$("line-run").addEventListener("click", runLine);
$("embed-run").addEventListener("click", runEmbed);
runRegular();
runLine();
runEmbed();
