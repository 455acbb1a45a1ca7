/** Linear and logarithmic axis scales with tick generation. */

export interface Scale {
  (value: number): number;
  ticks(): number[];
  domain: [number, number];
}

/** Rounds a raw step to the nearest 1/2/5 times a power of ten. */
function niceStep(span: number, count: number): number {
  const raw = span / Math.max(1, count);
  const power = Math.pow(10, Math.floor(Math.log10(raw)));
  const unit = raw / power;
  if (unit <= 1) return power;
  if (unit <= 2) return 2 * power;
  if (unit <= 5) return 5 * power;
  return 10 * power;
}

export function linearScale(
  domain: [number, number],
  range: [number, number],
  tickCount = 6,
): Scale {
  const [d0, d1] = domain;
  const [r0, r1] = range;
  const span = d1 - d0;
  const scale = ((value: number) => {
    if (span === 0) {
      return (r0 + r1) / 2;
    }
    return r0 + ((value - d0) / span) * (r1 - r0);
  }) as Scale;
  scale.domain = domain;
  scale.ticks = () => {
    if (span === 0) {
      return [d0];
    }
    const step = niceStep(span, tickCount);
    const start = Math.ceil(d0 / step) * step;
    const ticks: number[] = [];
    for (let v = start; v <= d1 + step * 1e-9; v += step) {
      ticks.push(Math.abs(v) < step * 1e-9 ? 0 : v);
    }
    return ticks;
  };
  return scale;
}

export function logScale(
  domain: [number, number],
  range: [number, number],
): Scale {
  const [d0, d1] = domain;
  if (!(d0 > 0) || !(d1 > 0)) {
    throw new Error(`log scale needs a positive domain, got [${d0}, ${d1}]`);
  }
  const l0 = Math.log10(d0);
  const l1 = Math.log10(d1);
  const span = l1 - l0;
  const [r0, r1] = range;
  const scale = ((value: number) => {
    if (span === 0) {
      return (r0 + r1) / 2;
    }
    return r0 + ((Math.log10(value) - l0) / span) * (r1 - r0);
  }) as Scale;
  scale.domain = domain;
  scale.ticks = () => {
    const ticks: number[] = [];
    const lo = Math.floor(l0);
    const hi = Math.ceil(l1);
    const mantissas = hi - lo <= 3 ? [1, 2, 5] : [1];
    for (let exp = lo; exp <= hi; exp += 1) {
      for (const m of mantissas) {
        const v = m * Math.pow(10, exp);
        if (v >= d0 * (1 - 1e-12) && v <= d1 * (1 + 1e-12)) {
          ticks.push(v);
        }
      }
    }
    return ticks;
  };
  return scale;
}

/** Compact tick label: trims float noise, switches to exponent form late. */
export function formatTick(value: number): string {
  if (value === 0) {
    return "0";
  }
  const magnitude = Math.abs(value);
  if (magnitude >= 10000 || magnitude < 0.001) {
    return value.toExponential(1).replace("e+", "e");
  }
  return String(parseFloat(value.toPrecision(6)));
}
