#!/usr/bin/env node
/** Command line: export backbone activations for one image or a directory. */

import * as fs from 'fs';
import * as path from 'path';
import yargs from 'yargs';
import { hideBin } from 'yargs/helpers';

import { exportImage } from './exporter';
import { BackboneId } from './drf';

async function main(): Promise<number> {
  const argv = await yargs(hideBin(process.argv))
    .command('export', 'export DRF feature files', (y) =>
      y
        .option('image', { type: 'string', demandOption: true,
                           describe: 'PPM image file or directory' })
        .option('backbone', {
          choices: ['vgg16', 'vgg19', 'mobilenetv2'] as const,
          demandOption: true,
        })
        .option('out', { type: 'string', demandOption: true })
        .option('weights', { type: 'string',
                             describe: 'tfjs model.json with pretrained weights' })
        .option('input-size', { type: 'number', default: 224 })
        .option('seed', { type: 'number', default: 0 }),
    )
    .demandCommand(1)
    .strict()
    .parse();

  const imageArg = argv.image as string;
  const images = fs.statSync(imageArg).isDirectory()
    ? fs
        .readdirSync(imageArg)
        .filter((n) => n.endsWith('.ppm'))
        .sort()
        .map((n) => path.join(imageArg, n))
    : [imageArg];
  if (images.length === 0) {
    console.error(`no .ppm images under ${imageArg}`);
    return 1;
  }

  let failures = 0;
  for (const imagePath of images) {
    try {
      const result = await exportImage({
        imagePath,
        backbone: argv.backbone as BackboneId,
        outDir: argv.out as string,
        weightsPath: argv.weights as string | undefined,
        inputSize: argv['input-size'] as number,
        seed: argv.seed as number,
      });
      console.log(`${imagePath} -> ${result.drfPath}`);
    } catch (err) {
      failures += 1;
      console.error(`${imagePath}: ${(err as Error).message}`);
    }
  }
  return failures === 0 ? 0 : 1;
}

main().then((code) => {
  process.exitCode = code;
});
