import init, { region, reduce_point, m_tilde_curve } from "./pkg/hypertransfer_web.js";

const COLORS = { circle: "#1f77b4", left: "#555", right: "#555", line: "#d62728", ellipse: "#2ca02c" };

// World box -> canvas pixels.
function view(canvas, x0, x1, y0, y1) {
  const w = canvas.width, h = canvas.height;
  return {
    px: (x) => ((x - x0) / (x1 - x0)) * w,
    py: (y) => h - ((y - y0) / (y1 - y0)) * h,
    wx: (px) => x0 + (px / w) * (x1 - x0),
    wy: (py) => y0 + ((h - py) / h) * (y1 - y0),
  };
}

function drawDomain(ctx, v) {
  ctx.strokeStyle = "#ddd";
  ctx.beginPath();
  for (let i = 0; i <= 64; i++) {
    const t = Math.PI / 3 + (i / 64) * (Math.PI / 3);
    const x = Math.cos(t), y = Math.sin(t);
    i ? ctx.lineTo(v.px(x), v.py(y)) : ctx.moveTo(v.px(x), v.py(y));
  }
  ctx.moveTo(v.px(-0.5), v.py(Math.sqrt(3) / 2));
  ctx.lineTo(v.px(-0.5), v.py(10));
  ctx.moveTo(v.px(0.5), v.py(Math.sqrt(3) / 2));
  ctx.lineTo(v.px(0.5), v.py(10));
  ctx.stroke();
}

function drawRegion() {
  const gx = parseFloat(document.getElementById("gx").value);
  const gy = parseFloat(document.getElementById("gy").value);
  document.getElementById("gx-out").textContent = gx.toFixed(3);
  document.getElementById("gy-out").textContent = gy.toFixed(3);
  const canvas = document.getElementById("region");
  const ctx = canvas.getContext("2d");
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  const v = view(canvas, -0.8, 0.8, 0.6, 3.0);
  drawDomain(ctx, v);
  let data;
  try {
    data = JSON.parse(region(gx, gy, 400));
  } catch (e) {
    document.getElementById("case").textContent = String(e);
    return;
  }
  ctx.lineWidth = 2;
  for (const p of data.polylines) {
    ctx.strokeStyle = COLORS[p.curve_id.split("-")[0]] || "#000";
    ctx.beginPath();
    p.points.forEach(([x, y], i) => (i ? ctx.lineTo(v.px(x), v.py(y)) : ctx.moveTo(v.px(x), v.py(y))));
    ctx.stroke();
  }
  ctx.lineWidth = 1;
  document.getElementById("case").textContent = data.case;
  document.getElementById("mhat").textContent = `${data.m_hat.toFixed(8)} (± ${data.error.toExponential(1)})`;
}

function setupPlane() {
  const canvas = document.getElementById("plane");
  const ctx = canvas.getContext("2d");
  const v = view(canvas, -3, 3, 0, 3);
  const base = () => {
    ctx.clearRect(0, 0, canvas.width, canvas.height);
    drawDomain(ctx, v);
  };
  base();
  canvas.addEventListener("click", (ev) => {
    const r = canvas.getBoundingClientRect();
    const x = v.wx(ev.clientX - r.left), y = v.wy(ev.clientY - r.top);
    base();
    try {
      const d = JSON.parse(reduce_point(x, y));
      const [a, b, c, dd] = d.gamma;
      ctx.fillStyle = "#d62728";
      ctx.beginPath(); ctx.arc(v.px(x), v.py(y), 4, 0, 2 * Math.PI); ctx.fill();
      ctx.fillStyle = "#1f77b4";
      ctx.beginPath(); ctx.arc(v.px(d.x0), v.py(Math.min(d.y0, 2.95)), 4, 0, 2 * Math.PI); ctx.fill();
      document.getElementById("reduced").textContent =
        `z  = ${x.toFixed(5)} + ${y.toFixed(5)}i\n` +
        `γ  = (${a}, ${b}; ${c}, ${dd})\n` +
        `z₀ = ${d.x0.toFixed(5)} + ${d.y0.toFixed(5)}i\n` +
        `first letter of γ: ${d.first_letter}`;
    } catch (e) {
      document.getElementById("reduced").textContent = String(e);
    }
  });
}

function drawCurve() {
  const rmin = parseFloat(document.getElementById("rmin").value);
  const steps = parseInt(document.getElementById("steps").value, 10);
  const status = document.getElementById("curve-status");
  const canvas = document.getElementById("curve");
  const ctx = canvas.getContext("2d");
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  const t0 = performance.now();
  let pts;
  try {
    pts = m_tilde_curve(rmin, 1.0, steps);
  } catch (e) {
    status.textContent = String(e);
    return;
  }
  const v = view(canvas, 0, 1, 0.45, 1.02);
  ctx.strokeStyle = "#ddd";
  for (const y of [0.5, 0.75, 1.0]) {
    ctx.beginPath(); ctx.moveTo(0, v.py(y)); ctx.lineTo(canvas.width, v.py(y)); ctx.stroke();
    ctx.fillStyle = "#888"; ctx.fillText(y.toFixed(2), 4, v.py(y) - 2);
  }
  ctx.strokeStyle = "#1f77b4";
  ctx.lineWidth = 2;
  ctx.beginPath();
  for (let i = 0; i < pts.length; i += 2) {
    const x = v.px(pts[i]), y = v.py(pts[i + 1]);
    i ? ctx.lineTo(x, y) : ctx.moveTo(x, y);
  }
  ctx.stroke();
  ctx.lineWidth = 1;
  status.textContent = `${steps} points in ${(performance.now() - t0).toFixed(0)} ms`;
}

await init();
document.getElementById("gx").addEventListener("input", drawRegion);
document.getElementById("gy").addEventListener("input", drawRegion);
document.getElementById("draw").addEventListener("click", drawCurve);
drawRegion();
setupPlane();
drawCurve();
