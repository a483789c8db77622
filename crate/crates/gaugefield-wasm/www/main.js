// Wires the three wasm exports to their canvases. No framework, no build
// step beyond `wasm-pack build --target web`.
import init, {
  solenoid_radial_profile,
  potential_field_slice,
  ab_phase_demo,
} from "./pkg/gaugefield_wasm.js";

const $ = (id) => document.getElementById(id);

function sliderValue(id) {
  return parseFloat($(id).value);
}

function bind(ids, redraw) {
  for (const id of ids) {
    $(id).addEventListener("input", redraw);
  }
  redraw();
}

function fmt(x, digits = 4) {
  return Number.parseFloat(x).toFixed(digits);
}

// ---- panel 1: radial profile ----------------------------------------------

function drawProfile() {
  const flux = sliderValue("profile-flux");
  const radius = sliderValue("profile-radius");
  const nRho = Math.max(1, Math.round(10 ** sliderValue("profile-nrho")));
  $("profile-flux-out").value = fmt(flux, 1);
  $("profile-radius-out").value = fmt(radius, 2);
  $("profile-nrho-out").value = String(nRho);

  const rhoMax = Math.max(4 * radius, 3);
  const data = JSON.parse(solenoid_radial_profile(flux, radius, rhoMax, 160, nRho));
  const canvas = $("profile-canvas");
  const ctx = canvas.getContext("2d");
  const { width: w, height: h } = canvas;
  ctx.clearRect(0, 0, w, h);

  const values = data.closed_form.concat(data.assembled);
  let lo = Math.min(0, ...values);
  let hi = Math.max(0, ...values);
  if (hi - lo < 1e-12) { hi = lo + 1; }
  const pad = 0.08 * (hi - lo);
  lo -= pad; hi += pad;
  const px = (rho) => 40 + (rho / rhoMax) * (w - 55);
  const py = (v) => h - 28 - ((v - lo) / (hi - lo)) * (h - 45);

  // axes and wall marker
  ctx.strokeStyle = "#99a";
  ctx.lineWidth = 1;
  ctx.beginPath();
  ctx.moveTo(40, py(0)); ctx.lineTo(w - 15, py(0));
  ctx.moveTo(40, 10); ctx.lineTo(40, h - 28);
  ctx.stroke();
  ctx.strokeStyle = "#c8b";
  ctx.setLineDash([4, 4]);
  ctx.beginPath();
  ctx.moveTo(px(data.wall_radius), 10); ctx.lineTo(px(data.wall_radius), h - 28);
  ctx.stroke();
  ctx.setLineDash([]);
  ctx.fillStyle = "#667";
  ctx.font = "12px sans-serif";
  ctx.fillText("rho = R", px(data.wall_radius) + 4, 20);
  ctx.fillText("A_theta(rho)", 6, 12);

  const curve = (ys, color, widthPx) => {
    ctx.strokeStyle = color;
    ctx.lineWidth = widthPx;
    ctx.beginPath();
    data.rho.forEach((rho, i) => {
      const x = px(rho); const y = py(ys[i]);
      if (i === 0) ctx.moveTo(x, y); else ctx.lineTo(x, y);
    });
    ctx.stroke();
  };
  curve(data.closed_form, "#888", 4);
  curve(data.assembled, "#1565c0", 1.6);

  let worst = 0;
  data.closed_form.forEach((c, i) => {
    const denom = Math.max(Math.abs(c), 1e-6);
    worst = Math.max(worst, Math.abs(c - data.assembled[i]) / denom);
  });
  $("profile-readout").innerHTML =
    `grey: closed form &nbsp; blue: assembled from ${nRho} flux-tube nodes<br>` +
    `worst relative deviation: ${worst.toExponential(2)}`;
}

// ---- panel 2: field slice ---------------------------------------------------

function drawField() {
  const flux = sliderValue("field-flux");
  const radius = sliderValue("field-radius");
  const extent = sliderValue("field-extent");
  $("field-flux-out").value = fmt(flux, 1);
  $("field-radius-out").value = fmt(radius, 2);
  $("field-extent-out").value = fmt(extent, 2);

  const n = 24;
  const data = JSON.parse(potential_field_slice(flux, radius, extent, n));
  const canvas = $("field-canvas");
  const ctx = canvas.getContext("2d");
  const { width: w, height: h } = canvas;
  ctx.clearRect(0, 0, w, h);

  const px = (x) => ((x + extent) / (2 * extent)) * w;
  const py = (y) => h - ((y + extent) / (2 * extent)) * h;
  const cell = w / n;
  const maxMag = Math.max(...data.mag, 1e-12);

  // |A| heat backdrop
  for (let i = 0; i < data.x.length; i++) {
    const s = data.mag[i] / maxMag;
    ctx.fillStyle = `rgba(21, 101, 192, ${0.08 + 0.5 * s})`;
    ctx.fillRect(px(data.x[i]) - cell / 2, py(data.y[i]) - cell / 2, cell, cell);
  }
  // quiver
  ctx.strokeStyle = "#10324f";
  ctx.lineWidth = 1;
  for (let i = 0; i < data.x.length; i++) {
    const mag = data.mag[i];
    if (mag < 1e-14) continue;
    const len = 0.45 * cell * (0.25 + 0.75 * mag / maxMag);
    const ux = data.ax[i] / mag, uy = data.ay[i] / mag;
    const x0 = px(data.x[i]) - ux * len, y0 = py(data.y[i]) + uy * len;
    const x1 = px(data.x[i]) + ux * len, y1 = py(data.y[i]) - uy * len;
    ctx.beginPath();
    ctx.moveTo(x0, y0); ctx.lineTo(x1, y1);
    // arrowhead
    const hx = x1 - 0.35 * (x1 - x0), hy = y1 - 0.35 * (y1 - y0);
    ctx.moveTo(x1, y1);
    ctx.lineTo(hx - 0.25 * (y1 - y0), hy + 0.25 * (x1 - x0));
    ctx.moveTo(x1, y1);
    ctx.lineTo(hx + 0.25 * (y1 - y0), hy - 0.25 * (x1 - x0));
    ctx.stroke();
  }
  // cylinder wall
  ctx.strokeStyle = "#b8423f";
  ctx.lineWidth = 2;
  ctx.beginPath();
  ctx.arc(px(0), py(0), (radius / (2 * extent)) * w, 0, 2 * Math.PI);
  ctx.stroke();
}

// ---- panel 3: AB phase ------------------------------------------------------

function drawPhase() {
  const q = sliderValue("phase-q");
  const loopRadius = sliderValue("phase-radius");
  const cx = sliderValue("phase-cx");
  const winding = Math.round(sliderValue("phase-winding")) || 1;
  $("phase-winding-out").value = String(winding);
  $("phase-q-out").value = fmt(q, 1);
  $("phase-radius-out").value = fmt(loopRadius, 2);
  $("phase-cx-out").value = fmt(cx, 1);

  const flux = 1.0, radius = 1.0, extent = 5.0;
  const data = JSON.parse(ab_phase_demo(flux, radius, q, loopRadius, cx, 0.0, winding, 720));
  const canvas = $("phase-canvas");
  const ctx = canvas.getContext("2d");
  const { width: w, height: h } = canvas;
  ctx.clearRect(0, 0, w, h);

  const px = (x) => ((x + extent) / (2 * extent)) * w;
  const py = (y) => h - ((y + extent) / (2 * extent)) * h;

  // flux region
  ctx.fillStyle = "rgba(184, 66, 63, 0.25)";
  ctx.beginPath();
  ctx.arc(px(0), py(0), (radius / (2 * extent)) * w, 0, 2 * Math.PI);
  ctx.fill();
  ctx.strokeStyle = "#b8423f";
  ctx.stroke();

  if (data.error) {
    $("phase-readout").textContent = `error: ${data.error}`;
    return;
  }
  // loop
  ctx.strokeStyle = "#1565c0";
  ctx.lineWidth = 2;
  ctx.beginPath();
  data.loop_xy.forEach(([x, y], i) => {
    if (i === 0) ctx.moveTo(px(x), py(y)); else ctx.lineTo(px(x), py(y));
  });
  ctx.closePath();
  ctx.stroke();

  const enclosed = data.enclosed_flux === null ? "n/a (loop overlaps the wall)"
    : fmt(data.enclosed_flux);
  $("phase-readout").innerHTML =
    `circulation &#8750;A&middot;dl = ${fmt(data.circulation)}<br>` +
    `winding = ${data.winding}, enclosed flux = ${enclosed}<br>` +
    `<b>phase = q &#8750;A&middot;dl = ${fmt(data.phase)} rad</b> ` +
    `(q &Phi; winding = ${fmt(q * flux * data.winding)})`;
}

init().then(() => {
  bind(["profile-flux", "profile-radius", "profile-nrho"], drawProfile);
  bind(["field-flux", "field-radius", "field-extent"], drawField);
  bind(["phase-q", "phase-radius", "phase-cx", "phase-winding"], drawPhase);
});
