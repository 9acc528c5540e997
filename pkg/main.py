"""
Orquestrador do pipeline de morfemas

Coordena o fluxo de dados através das etapas:
Extract -> Transform (mineração, segmentação) -> Embed -> Evaluate -> Load
"""

import argparse
import logging
import sys
from collections import Counter

import pandas as pd

from benchmark import fit_summary, measure_scalability
from config.settings import DEFAULTS, ConfigError, load_config
from embed.model import EmbeddingParams
from embed.trainer import train
from embed.vectors import EmbeddingError, WordVectors
from evaluation.evaluator import (
    AnalogyEvaluator,
    EvaluationError,
    SegmentationEvaluator,
    SimilarityEvaluator,
)
from extract.extractor import (
    AnalogyExtractor,
    CorpusExtractor,
    ExtractionError,
    GoldExtractor,
    MorphemeVocabExtractor,
    SegmentationExtractor,
    SimilarityExtractor,
    VectorExtractor,
    VocabularyExtractor,
)
from extract.vocabulary import Vocabulary, VocabularyError
from load.loader import (
    DataLoader,
    TSVLoader,
    VectorLoader,
    morpheme_frame,
    segmentation_frame,
    trie_frame,
    vocabulary_frame,
)
from transform.pipeline import Segmenter
from transform.segmenter import IntervalError
from transform.transformer import MorphemeMiner, VocabularySegmenter
from transform.trie import FORWARD, REVERSED, UnknownPrefixError, build_trie
from visualize import ReportVisualizer

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2

DATA_ERRORS = (
    VocabularyError, ExtractionError, EmbeddingError, EvaluationError,
    IntervalError, UnknownPrefixError, OSError, ValueError,
)

logger = logging.getLogger(__name__)
_handler = None


class UsageError(Exception):
    """Uso inválido da linha de comando"""


class CLIParser(argparse.ArgumentParser):
    """ArgumentParser que levanta UsageError em vez de encerrar o processo"""

    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def configure_logging(verbose=False, quiet=False):
    """Logs em stderr; dados ficam em stdout ou --out"""
    global _handler
    level = logging.DEBUG if verbose else logging.WARNING if quiet else logging.INFO
    root = logging.getLogger()
    if _handler is not None:
        root.removeHandler(_handler)
    _handler = logging.StreamHandler(sys.stderr)
    _handler.setFormatter(logging.Formatter(LOG_FORMAT))
    root.addHandler(_handler)
    root.setLevel(level)


def _option(parser, flag, section, key, help_text, **kwargs):
    """Flag ligada a config[section][key]; o help mostra o default"""
    default = DEFAULTS[section][key]
    if 'action' not in kwargs:
        kwargs.setdefault('type', type(default))
        kwargs.setdefault('metavar', key.upper())
    parser.add_argument(
        flag, dest=f'{section}.{key}', default=None,
        help=f'{help_text} (padrão: {default})', **kwargs,
    )


def _int_list(text):
    try:
        values = [int(x) for x in text.split(',') if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f'lista de inteiros inválida: {text!r}') from None
    if not values or any(v < 1 for v in values):
        raise argparse.ArgumentTypeError(f'lista de inteiros inválida: {text!r}')
    return values


def _word_list(text):
    return [w.strip() for w in text.split(',') if w.strip()]


def _common_parser():
    common = CLIParser(add_help=False)
    common.add_argument('--config', default=None,
                        help='arquivo key=value com SECTION_KEY=valor (padrão: nenhum)')
    _option(common, '--seed', 'run', 'seed', 'semente de toda a aleatoriedade')
    _option(common, '--threads', 'run', 'threads', 'trabalhadores paralelos; 1 é determinístico')
    _option(common, '--destination-type', 'load', 'destination_type',
            'destino das tabelas: tsv, sqlite ou both')
    _option(common, '--database-url', 'database', 'url', 'URL SQLAlchemy do banco')
    verbosity = common.add_mutually_exclusive_group()
    verbosity.add_argument('-v', '--verbose', action='store_true', help='logs de depuração (padrão: desligado)')
    verbosity.add_argument('-q', '--quiet', action='store_true', help='apenas avisos e erros (padrão: desligado)')
    return common


def _vocab_options(parser):
    _option(parser, '--mode', 'vocab', 'mode', 'formato da entrada: word-list ou corpus')
    _option(parser, '--no-case-fold', 'vocab', 'case_fold', 'desliga o case-folding',
            action='store_const', const=False)
    _option(parser, '--no-nfc', 'vocab', 'unicode_nfc', 'desliga a normalização NFC',
            action='store_const', const=False)
    _option(parser, '--token-weighted', 'vocab', 'token_weighted',
            'pesa as palavras pela frequência de tokens', action='store_const', const=True)


def _mine_options(parser):
    _option(parser, '--min-support', 'mine', 'min_support', 'suporte mínimo de um candidato')
    _option(parser, '--min-root-len', 'mine', 'min_root_len', 'comprimento mínimo de raiz')
    _option(parser, '--min-affix-len', 'mine', 'min_affix_len', 'comprimento mínimo de afixo')
    _option(parser, '--no-end-of-word', 'trie', 'end_of_word',
            'não conta o fim de palavra como desfecho', action='store_const', const=False)


def _segment_options(parser):
    _option(parser, '--rounds', 'segment', 'rounds', 'rodadas de refinamento')
    _option(parser, '--prune-below', 'segment', 'prune_below', 'uso mínimo para manter um morfema')
    _option(parser, '--max-segmentations', 'segment', 'max_segmentations',
            'máximo de segmentações empatadas enumeradas')
    _option(parser, '--usage-levels', 'segment', 'usage_levels',
            'níveis contados no refinamento: all ou top')


def _embed_options(parser):
    _option(parser, '--dim', 'embed', 'dim', 'dimensão dos vetores')
    _option(parser, '--window', 'embed', 'window', 'janela de contexto')
    _option(parser, '--negatives', 'embed', 'negatives', 'amostras negativas por par')
    _option(parser, '--lr', 'embed', 'lr', 'taxa de aprendizado inicial')
    _option(parser, '--epochs', 'embed', 'epochs', 'épocas')
    _option(parser, '--min-count', 'embed', 'min_count', 'frequência mínima no corpus')


def _vector_options(parser):
    parser.add_argument('vectors', help='arquivo de vetores de palavras')
    parser.add_argument('--morph-vectors', default=None,
                        help='arquivo de vetores de morfemas para palavras novas (padrão: nenhum)')
    parser.add_argument('--morph-vocab', default=None,
                        help='vocabulário de morfemas TSV para segmentar palavras novas (padrão: nenhum)')
    parser.add_argument('--dim', type=int, default=None,
                        help='dimensão esperada dos vetores (padrão: a do arquivo)')
    _option(parser, '--oov-policy', 'eval', 'oov_policy', 'palavras novas: infer ou skip')
    parser.add_argument('-o', '--out', default=None, help='TSV de métricas (padrão: nenhum)')


def build_parser():
    """Parser com os subcomandos mine, segment, embed, eval-seg, eval-sim, eval-analogy e stats"""
    common = _common_parser()
    parser = CLIParser(prog='morphind', description='Indução não supervisionada de morfemas')
    commands = parser.add_subparsers(dest='command', metavar='COMMAND')
    commands.required = True

    mine = commands.add_parser('mine', parents=[common], help='minera o vocabulário de morfemas')
    mine.add_argument('vocab', help='lista de palavras (word[<TAB>count]) ou corpus')
    mine.add_argument('-o', '--out', default=None, help='TSV do vocabulário de morfemas (padrão: stdout)')
    mine.add_argument('--vocab-out', default=None, help='TSV canônico do vocabulário (padrão: nenhum)')
    mine.add_argument('--trie-dump', default=None,
                      help='prefixo dos despejos <p>.forward.tsv e <p>.reversed.tsv (padrão: nenhum)')
    _vocab_options(mine)
    _mine_options(mine)
    mine.set_defaults(handler=cmd_mine)

    segment = commands.add_parser('segment', parents=[common], help='segmenta o vocabulário')
    segment.add_argument('vocab', help='lista de palavras ou corpus')
    segment.add_argument('--morph-vocab', default=None,
                         help='vocabulário de morfemas TSV; minera quando ausente (padrão: nenhum)')
    segment.add_argument('-o', '--out', default=None, help='arquivo de segmentações (padrão: stdout)')
    segment.add_argument('--hierarchical', action='store_true',
                         help='saída com parênteses por nó (padrão: plana)')
    segment.add_argument('--refined-out', default=None,
                         help='TSV do vocabulário de morfemas refinado (padrão: nenhum)')
    _vocab_options(segment)
    _mine_options(segment)
    _segment_options(segment)
    segment.set_defaults(handler=cmd_segment)

    embed = commands.add_parser('embed', parents=[common], help='treina embeddings com morfemas')
    embed.add_argument('corpus', help='corpus com sentenças tokenizadas por espaço')
    embed.add_argument('--morph-vocab', default=None,
                       help='vocabulário de morfemas TSV; minera quando ausente (padrão: nenhum)')
    embed.add_argument('--out-words', required=True, help='vetores de palavras (somas das sacolas)')
    embed.add_argument('--out-morphs', required=True, help='vetores de morfemas')
    embed.add_argument('--out-morph-vocab', default=None,
                       help='TSV do vocabulário de morfemas usado (padrão: nenhum)')
    _vocab_options(embed)
    _mine_options(embed)
    _segment_options(embed)
    _embed_options(embed)
    embed.set_defaults(handler=cmd_embed)

    eval_seg = commands.add_parser('eval-seg', parents=[common], help='P/R/F1 contra padrão-ouro')
    eval_seg.add_argument('pred', help='segmentações previstas (planas ou com parênteses)')
    eval_seg.add_argument('gold', help='padrão-ouro word<TAB>alt1, alt2')
    eval_seg.add_argument('-o', '--out', default=None, help='TSV de métricas (padrão: nenhum)')
    _option(eval_seg, '--average', 'eval', 'average', 'média: micro ou macro')
    _option(eval_seg, '--all-granularities', 'eval', 'all_granularities',
            'conta todos os nós da hierarquia', action='store_const', const=True)
    _option(eval_seg, '--tag-delimiter', 'eval', 'tag_delimiter', 'delimitador de anotações')
    eval_seg.set_defaults(handler=cmd_eval_seg)

    eval_sim = commands.add_parser('eval-sim', parents=[common], help='Spearman em similaridade')
    _vector_options(eval_sim)
    eval_sim.add_argument('pairs', help='pares word_a<TAB>word_b<TAB>score')
    eval_sim.set_defaults(handler=cmd_eval_sim)

    eval_analogy = commands.add_parser('eval-analogy', parents=[common], help='acurácia 3CosAdd')
    _vector_options(eval_analogy)
    eval_analogy.add_argument('quads', help='linhas "a b c d" com seções ": nome"')
    eval_analogy.set_defaults(handler=cmd_eval_analogy)

    stats = commands.add_parser('stats', parents=[common], help='estatísticas e relatório HTML')
    stats.add_argument('vocab', help='lista de palavras ou corpus')
    stats.add_argument('--morph-vocab', default=None,
                       help='vocabulário de morfemas TSV; minera quando ausente (padrão: nenhum)')
    stats.add_argument('-o', '--out', default=None, help='TSV de estatísticas (padrão: stdout)')
    stats.add_argument('--report', default=None, help='relatório HTML com plotly (padrão: nenhum)')
    stats.add_argument('--words', type=_word_list, default=[],
                       help='palavras com perfil de entropia no relatório, separadas por vírgula (padrão: nenhuma)')
    stats.add_argument('--scalability', type=_int_list, default=None,
                       help='tamanhos de subamostra, ex.: 10000,20000,40000 (padrão: não mede)')
    _vocab_options(stats)
    _mine_options(stats)
    _segment_options(stats)
    stats.set_defaults(handler=cmd_stats)

    return parser


def _overrides(args):
    return {
        tuple(dest.split('.', 1)): value
        for dest, value in vars(args).items()
        if '.' in dest and value is not None
    }


def _morpheme_vocab(config, args, vocabulary):
    if args.morph_vocab:
        return MorphemeVocabExtractor(config).extract(args.morph_vocab), None
    miner = MorphemeMiner(config)
    return miner.transform(vocabulary), miner


def _print_table(frame):
    print(frame.to_string(index=False))


def cmd_mine(args, config):
    vocabulary = VocabularyExtractor(config).extract(args.vocab)
    miner = MorphemeMiner(config)
    morpheme_vocab = miner.transform(vocabulary)

    DataLoader(config).load(morpheme_frame(morpheme_vocab), args.out, table='morphemes')
    if args.vocab_out:
        DataLoader(config).load(vocabulary_frame(vocabulary), args.vocab_out, table='vocabulary')
    if args.trie_dump:
        TSVLoader(config).load(trie_frame(miner.forward), f'{args.trie_dump}.forward.tsv')
        TSVLoader(config).load(trie_frame(miner.backward), f'{args.trie_dump}.reversed.tsv')

    print(f'morphemes={len(morpheme_vocab)}', file=sys.stderr)
    return EXIT_OK


def cmd_segment(args, config):
    vocabulary = VocabularyExtractor(config).extract(args.vocab)
    morpheme_vocab, _ = _morpheme_vocab(config, args, vocabulary)
    result = VocabularySegmenter(config).transform(vocabulary, morpheme_vocab)

    DataLoader(config).load(
        segmentation_frame(result.forests, args.hierarchical), args.out, table='segmentations'
    )
    if args.refined_out:
        DataLoader(config).load(morpheme_frame(result.morpheme_vocab), args.refined_out, table='morphemes')
    print(f'words={len(result.forests)} flagged={len(result.flagged)}', file=sys.stderr)
    return EXIT_OK


def cmd_embed(args, config):
    sentences = CorpusExtractor(config).extract(args.corpus)
    counts = Counter(token for sentence in sentences for token in sentence)
    if not counts:
        raise EmbeddingError(f'corpus vazio: {args.corpus}')
    vocabulary = Vocabulary.from_counts(counts.items())

    morpheme_vocab, _ = _morpheme_vocab(config, args, vocabulary)
    result = VocabularySegmenter(config).transform(vocabulary, morpheme_vocab)
    params = EmbeddingParams.from_config(config)
    model = train(sentences, result.forests, params, Segmenter(result.morpheme_vocab))

    vectors = model.to_word_vectors(result.morpheme_vocab)
    VectorLoader(config).load((vectors.words, vectors.matrix), args.out_words)
    VectorLoader(config).load((vectors.morphemes, vectors.morph_matrix), args.out_morphs)
    if args.out_morph_vocab:
        TSVLoader(config).load(morpheme_frame(result.morpheme_vocab), args.out_morph_vocab)
    print(f'words={len(vectors)} morphemes={len(vectors.morphemes)} dim={params.dim}', file=sys.stderr)
    return EXIT_OK


def _emit(config, frame, out, table):
    _print_table(frame)
    if out:
        DataLoader(config).load(frame, out, table=table)


def cmd_eval_seg(args, config):
    gold = GoldExtractor(config).extract(args.gold)
    predictions = SegmentationExtractor(config).extract(args.pred)
    result = SegmentationEvaluator(config).evaluate(predictions, gold)
    _emit(config, result.to_frame(), args.out, 'segmentation_metrics')
    return EXIT_OK


def _load_vectors(config, args):
    extractor = VectorExtractor(config)
    words, matrix = extractor.extract(args.vectors)
    if args.dim is not None and matrix.shape[1] != args.dim:
        raise EmbeddingError(f'{args.vectors}: dimensão {matrix.shape[1]} diferente de --dim {args.dim}')
    morphemes, morph_matrix = (), None
    if args.morph_vectors:
        morphemes, morph_matrix = extractor.extract(args.morph_vectors)
    morpheme_vocab = MorphemeVocabExtractor(config).extract(args.morph_vocab) if args.morph_vocab else None
    return WordVectors(words, matrix, morphemes, morph_matrix, morpheme_vocab)


def cmd_eval_sim(args, config):
    vectors = _load_vectors(config, args)
    pairs = SimilarityExtractor(config).extract(args.pairs)
    report = SimilarityEvaluator(config).evaluate(vectors, pairs)
    _emit(config, report.to_frame(), args.out, 'similarity_metrics')
    return EXIT_OK


def cmd_eval_analogy(args, config):
    vectors = _load_vectors(config, args)
    quads = AnalogyExtractor(config).extract(args.quads)
    report = AnalogyEvaluator(config).evaluate(vectors, quads)
    _emit(config, report.to_frame(), args.out, 'analogy_metrics')
    return EXIT_OK


def vocabulary_stats(vocabulary, morpheme_vocab, forward=None, backward=None):
    """Estatísticas resumidas (nome -> valor) do vocabulário e dos morfemas"""
    totals = morpheme_vocab.class_totals()
    lengths = [len(m) for m in morpheme_vocab.entries]
    stats = {
        'types': vocabulary.total_types,
        'tokens': vocabulary.total_tokens,
        'characters': vocabulary.char_count,
        'morphemes': len(morpheme_vocab),
        'prefixes': totals.get('P', 0),
        'suffixes': totals.get('S', 0),
        'roots': totals.get('R', 0),
        'mean_morpheme_length': round(sum(lengths) / len(lengths), 4) if lengths else 0.0,
    }
    if forward is not None:
        stats['forward_trie_nodes'] = forward.node_count
    if backward is not None:
        stats['reversed_trie_nodes'] = backward.node_count
    return stats


def cmd_stats(args, config):
    vocabulary = VocabularyExtractor(config).extract(args.vocab)
    morpheme_vocab, miner = _morpheme_vocab(config, args, vocabulary)
    if miner is not None:
        forward, backward = miner.forward, miner.backward
    else:
        end_of_word = config['trie']['end_of_word']
        weighted = config['vocab']['token_weighted']
        forward = build_trie(vocabulary, FORWARD, end_of_word, weighted)
        backward = build_trie(vocabulary, REVERSED, end_of_word, weighted)

    stats = vocabulary_stats(vocabulary, morpheme_vocab, forward, backward)
    frame = pd.DataFrame(list(stats.items()), columns=['stat', 'value'])
    DataLoader(config).load(frame, args.out, table='stats')

    timings = fits = None
    if args.scalability:
        timings = measure_scalability(vocabulary, args.scalability, config)
        fits = fit_summary(timings)
        TSVLoader(config).load(fits, sys.stderr)

    if args.report:
        words = [w for w in args.words if w in vocabulary]
        skipped = set(args.words) - set(words)
        if skipped:
            logger.warning(f"Palavras fora do vocabulário ignoradas no relatório: {sorted(skipped)}")
        ReportVisualizer(args.report).generate_report(
            stats, morpheme_vocab, forward, backward, words, timings, fits
        )
    return EXIT_OK


def main(argv=None):
    """Executa um subcomando e devolve o código de saída (0, 1 uso, 2 dados)"""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        print(f'{parser.prog}: erro: {e}', file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as e:
        # --help
        return e.code if isinstance(e.code, int) else EXIT_OK

    configure_logging(args.verbose, args.quiet)
    try:
        config = load_config(args.config, _overrides(args))
    except ConfigError as e:
        for error in e.errors:
            logger.error(f"Configuração inválida: {error}")
        return EXIT_USAGE
    logger.info("Configurações carregadas com sucesso")

    try:
        return args.handler(args, config)
    except DATA_ERRORS as e:
        logger.error(f"Erro durante execução de {args.command}: {e}")
        return EXIT_DATA
    except Exception as e:
        logger.exception(f"Erro inesperado durante execução de {args.command}: {e}")
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
