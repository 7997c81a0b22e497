/** Binary PPM (P6, maxval <= 255) reader. */

import * as fs from 'fs';

export interface RgbImage {
  height: number;
  width: number;
  /** H*W*3, row-major, values in [0, 255] */
  data: Float32Array;
}

export function readPpm(path: string): RgbImage {
  const buf = fs.readFileSync(path);
  if (buf.toString('ascii', 0, 2) !== 'P6') {
    throw new Error(`${path}: only binary PPM (P6) is supported`);
  }
  // header: magic, width, height, maxval separated by whitespace/comments
  const tokens: string[] = [];
  let pos = 2;
  while (tokens.length < 3) {
    const ch = String.fromCharCode(buf[pos]);
    if (ch === '#') {
      while (buf[pos] !== 0x0a) pos++;
      pos++;
    } else if (/\s/.test(ch)) {
      pos++;
    } else {
      let tok = '';
      while (pos < buf.length && !/\s/.test(String.fromCharCode(buf[pos]))) {
        tok += String.fromCharCode(buf[pos]);
        pos++;
      }
      tokens.push(tok);
    }
  }
  pos++; // single whitespace after maxval
  const [width, height, maxval] = tokens.map(Number);
  if (!(maxval >= 1 && maxval <= 255)) {
    throw new Error(`${path}: unsupported maxval ${maxval}`);
  }
  const n = width * height * 3;
  if (buf.length - pos < n) {
    throw new Error(`${path}: truncated pixel data`);
  }
  const data = new Float32Array(n);
  const scale = 255 / maxval;
  for (let i = 0; i < n; i++) {
    data[i] = buf[pos + i] * scale;
  }
  return { height, width, data };
}
