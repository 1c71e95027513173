import init, { evaluate, aggregator_curve, connective_grid } from './pkg/nesy_wasm.js';

const $ = (id) => document.getElementById(id);

const TRAFFIC_SIG = {
  sorts: ['Crossing', 'Colour', 'Action'],
  funcs: { red: { args: [], result: 'Colour' }, go: { args: [], result: 'Action' } },
  mfuncs: {
    light: { args: ['Crossing'], result: 'Colour' },
    drive: { args: ['Crossing', 'Colour'], result: 'Action' },
  },
};

const TRAFFIC_INTERP = {
  sorts: { Crossing: ['main_st'], Colour: ['red', 'amber', 'green'], Action: ['stop', 'go'] },
  funcs: { red: { kind: 'table', rows: [['red']] }, go: { kind: 'table', rows: [['go']] } },
  mfuncs: {
    light: { kind: 'ctable', rows: [['main_st', [['red', 1 / 3], ['amber', 1 / 3], ['green', 1 / 3]]]] },
    drive: {
      kind: 'ctable',
      rows: [
        ['main_st', 'red', [['stop', 1]]],
        ['main_st', 'amber', [['stop', 0.5], ['go', 0.5]]],
        ['main_st', 'green', [['go', 1]]],
      ],
    },
  },
};

function call(fn, ...args) {
  const out = JSON.parse(fn(...args));
  if (out.error) throw new Error(out.error);
  return out.ok;
}

function runEval() {
  try {
    const r = call(evaluate, $('sig').value, $('interp').value, $('formula').value,
      $('framework').value, $('algebra').value, Number($('samples').value), Number($('seed').value));
    let line = `${r.framework}: value = ${r.value}`;
    if (r.stderr !== null) line += `  (stderr ${r.stderr.toFixed(5)}, ${r.samples} samples)`;
    $('result').textContent = line;
  } catch (e) {
    $('result').textContent = e.message;
  }
}

function plotCurve() {
  const canvas = $('curve-canvas');
  const ctx = canvas.getContext('2d');
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  try {
    const r = call(aggregator_curve, $('family').value, $('quant').value, Number($('pmax').value), 120);
    const pmax = r.points[r.points.length - 1][0];
    const x = (p) => 30 + (canvas.width - 40) * (p - 1) / Math.max(pmax - 1, 1e-9);
    const y = (v) => canvas.height - 20 - (canvas.height - 30) * v;
    ctx.strokeStyle = '#bbb';
    for (const [label, v] of [['min', r.min], ['max', r.max]]) {
      ctx.beginPath(); ctx.moveTo(30, y(v)); ctx.lineTo(canvas.width - 10, y(v)); ctx.stroke();
      ctx.fillText(label, 2, y(v) + 4);
    }
    ctx.strokeStyle = '#c33';
    ctx.beginPath();
    r.points.forEach(([p, v], i) => (i ? ctx.lineTo(x(p), y(v)) : ctx.moveTo(x(p), y(v))));
    ctx.stroke();
    const last = r.points[r.points.length - 1];
    $('curve-info').textContent = `p = 1: ${r.points[0][1].toFixed(4)}   p = ${pmax}: ${last[1].toFixed(4)}`;
  } catch (e) {
    $('curve-info').textContent = e.message;
  }
}

function drawGrid() {
  const canvas = $('grid-canvas');
  const ctx = canvas.getContext('2d');
  try {
    const n = 64;
    const r = call(connective_grid, $('grid-alg').value, $('grid-op').value, n);
    const [lo, hi] = r.range;
    const cell = canvas.width / n;
    r.grid.forEach((row, i) => row.forEach((v, j) => {
      const t = Math.min(1, Math.max(0, (v - lo) / (hi - lo)));
      ctx.fillStyle = `rgb(${Math.round(255 * t)}, ${Math.round(80 + 100 * t)}, ${Math.round(255 * (1 - t))})`;
      ctx.fillRect(j * cell, canvas.height - (i + 1) * cell, cell + 1, cell + 1);
    }));
    $('grid-info').textContent = `${r.algebra} ${r.connective}(x, y): x grows upward, y grows to the right, range [${lo}, ${hi}]`;
  } catch (e) {
    $('grid-info').textContent = e.message;
  }
}

await init();
$('sig').value = JSON.stringify(TRAFFIC_SIG, null, 1);
$('interp').value = JSON.stringify(TRAFFIC_INTERP, null, 1);
$('formula').value = 'forall x:Crossing. [l := light(x), d := drive(x, l)] (eq(d, go) | eq(l, red))';
$('run').onclick = runEval;
$('curve').onclick = plotCurve;
$('grid').onclick = drawGrid;
runEval();
plotCurve();
drawGrid();
