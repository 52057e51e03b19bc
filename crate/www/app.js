// Demo page wiring: three panels backed by the wasm module. No framework,
// just canvas 2D.

let wasm;
try {
  wasm = await import("./pkg/dqlg_wasm.js");
  await wasm.default();
} catch (e) {
  document.getElementById("missing").style.display = "block";
  console.error("wasm package not found:", e);
}

const css = getComputedStyle(document.documentElement);
const ACCENT = css.getPropertyValue("--accent").trim() || "#0b6aa8";
const ACCENT2 = css.getPropertyValue("--accent2").trim() || "#c4501e";
const MUTED = "#999";

function clearCanvas(ctx) {
  ctx.clearRect(0, 0, ctx.canvas.width, ctx.canvas.height);
}

function drawAxes(ctx, pad) {
  const { width: w, height: h } = ctx.canvas;
  ctx.strokeStyle = "#ccc";
  ctx.lineWidth = 1;
  ctx.beginPath();
  ctx.moveTo(pad, 10);
  ctx.lineTo(pad, h - pad);
  ctx.lineTo(w - 10, h - pad);
  ctx.stroke();
}

function polyline(ctx, points, color, widthPx = 2) {
  if (points.length === 0) return;
  ctx.strokeStyle = color;
  ctx.lineWidth = widthPx;
  ctx.beginPath();
  points.forEach(([x, y], i) => (i === 0 ? ctx.moveTo(x, y) : ctx.lineTo(x, y)));
  ctx.stroke();
}

// ---------------------------------------------------------------- wavepacket
if (wasm) {
  const L = 256;
  const canvas = document.getElementById("wp-canvas");
  const ctx = canvas.getContext("2d");
  const readout = document.getElementById("wp-readout");
  const controls = {
    eps: document.getElementById("wp-eps"),
    k0: document.getElementById("wp-k0"),
    width: document.getElementById("wp-width"),
    ea: document.getElementById("wp-ea"),
    branch: document.getElementById("wp-branch"),
  };
  let demo = null;
  let running = true;
  let trace = [];

  function rebuild() {
    const eps = parseFloat(controls.eps.value);
    const k0 = parseFloat(controls.k0.value);
    const width = parseFloat(controls.width.value);
    const ea = parseFloat(controls.ea.value);
    document.getElementById("wp-eps-val").textContent = eps.toFixed(2);
    document.getElementById("wp-k0-val").textContent = k0.toFixed(2);
    document.getElementById("wp-width-val").textContent = width.toFixed(0);
    document.getElementById("wp-ea-val").textContent = ea.toFixed(2);
    demo = new wasm.PacketDemo(L, eps, k0, width, controls.branch.checked, ea);
    trace = [];
  }

  function frame() {
    if (demo && running) {
      demo.advance(1);
      trace.push(demo.mean_z());
      if (trace.length > 600) trace.shift();
      render();
    }
    requestAnimationFrame(frame);
  }

  function render() {
    clearCanvas(ctx);
    const { width: w, height: h } = canvas;
    const density = demo.density();
    const peak = Math.max(...density, 1e-12);
    const pts = Array.from(density, (d, i) => [
      (i / (L - 1)) * (w - 20) + 10,
      h - 30 - (d / peak) * (h - 60),
    ]);
    polyline(ctx, pts, ACCENT);
    // mean-position trace, most recent 600 steps, drawn in lattice units mod L
    const tracePts = trace.map((z, i) => [
      (i / 600) * (w - 20) + 10,
      h - 30 - (((z % L) + L) % L / L) * (h - 60),
    ]);
    polyline(ctx, tracePts, ACCENT2, 1);
    ctx.fillStyle = MUTED;
    ctx.font = "12px system-ui";
    ctx.fillText("density", 14, 18);
    ctx.fillText("mean position (wrapped)", 120, 18);
    readout.textContent =
      `step ${demo.step_index()}   norm ${demo.norm().toFixed(12)}   ` +
      `mean z ${demo.mean_z().toFixed(3)}   energy ${demo.energy().toFixed(4)}`;
  }

  for (const c of Object.values(controls)) c.addEventListener("input", rebuild);
  document.getElementById("wp-reset").addEventListener("click", rebuild);
  document.getElementById("wp-toggle").addEventListener("click", (e) => {
    running = !running;
    e.target.textContent = running ? "pause" : "run";
  });
  rebuild();
  requestAnimationFrame(frame);
}

// ---------------------------------------------------------------- dispersion
if (wasm) {
  const canvas = document.getElementById("dp-canvas");
  const ctx = canvas.getContext("2d");
  const slider = document.getElementById("dp-eps");

  function render() {
    const eps = parseFloat(slider.value);
    document.getElementById("dp-eps-val").textContent = eps.toFixed(2);
    const rows = wasm.dispersion_series(eps, 160);
    clearCanvas(ctx);
    drawAxes(ctx, 34);
    const { width: w, height: h } = canvas;
    const kMax = Math.PI;
    const yMax = Math.sqrt(kMax * kMax + 1) + 0.2;
    const sx = (k) => 34 + (k / kMax) * (w - 50);
    const sy = (v) => h - 34 - (v / yMax) * (h - 50);
    const phi = [], cont = [];
    for (let i = 0; i < rows.length; i += 3) {
      phi.push([sx(rows[i]), sy(rows[i + 1])]);
      cont.push([sx(rows[i]), sy(rows[i + 2])]);
    }
    polyline(ctx, cont, MUTED, 1.5);
    polyline(ctx, phi, ACCENT);
    ctx.fillStyle = MUTED;
    ctx.font = "12px system-ui";
    ctx.fillText("k", canvas.width - 18, canvas.height - 16);
    ctx.fillStyle = ACCENT;
    ctx.fillText("phi(k) per step", 44, 20);
    ctx.fillStyle = MUTED;
    ctx.fillText("sqrt(k^2 + m^2)", 160, 20);
  }

  slider.addEventListener("input", render);
  render();
}

// -------------------------------------------------------------- time dilation
if (wasm) {
  const canvas = document.getElementById("dl-canvas");
  const ctx = canvas.getContext("2d");
  const zeta = wasm.dilation_series(200);
  const schw = wasm.schwarzschild_series(200, 0.45);
  clearCanvas(ctx);
  drawAxes(ctx, 34);
  const { width: w, height: h } = canvas;
  const sx = (x) => 34 + x * (w - 50);
  const syZ = (z) => h - 34 - ((z - 1.0) / (Math.PI / 2 - 1.0)) * (h - 60);
  const zetaPts = [];
  for (let i = 0; i < zeta.length; i += 2) zetaPts.push([sx(zeta[i]), syZ(zeta[i + 1])]);
  polyline(ctx, zetaPts, ACCENT);
  // dilation comparison, rescaled into the same box
  const vMax = 0.5;
  const syS = (v) => h - 34 - (v / vMax) * (h - 60);
  const lhs = [], rhs = [];
  for (let i = 0; i < schw.length; i += 4) {
    lhs.push([sx(schw[i]), syS(schw[i + 1])]);
    rhs.push([sx(schw[i]), syS(schw[i + 2])]);
  }
  polyline(ctx, rhs, MUTED, 3);
  polyline(ctx, lhs, ACCENT2, 1.5);
  ctx.font = "12px system-ui";
  ctx.fillStyle = ACCENT;
  ctx.fillText("zeta(x): 1 at long wavelengths, pi/2 at the grid scale", 44, 20);
  ctx.fillStyle = ACCENT2;
  ctx.fillText("zeta p' (thin) on sqrt(1 - 1/zeta) (grey): dilation correspondence", 44, 36);
}
