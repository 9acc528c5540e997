"""Árvore de prefixos com contagens e entropia de transição"""

import logging
import math

logger = logging.getLogger(__name__)

FORWARD = 'forward'
REVERSED = 'reversed'


class UnknownPrefixError(KeyError):
    """Prefixo inexistente na árvore"""


class Node:
    __slots__ = ('children', 'count', 'terminal', 'entropy')

    def __init__(self):
        self.children = {}
        self.count = 0
        self.terminal = 0
        self.entropy = 0.0

    def child(self, char):
        node = self.children.get(char)
        if node is None:
            node = self.children[char] = Node()
        return node

    def outcomes(self, end_of_word):
        counts = [c.count for c in self.children.values()]
        if end_of_word and self.terminal:
            counts.append(self.terminal)
        return counts


def categorical_entropy(counts):
    """Entropia (bits) da distribuição categórica estimada pelas contagens

    Usa H = log2(T) - sum(c log2 c) / T; termos nulos contribuem 0.
    """
    total = sum(counts)
    if total <= 0:
        return 0.0
    acc = math.fsum(c * math.log2(c) for c in counts if c > 0)
    h = math.log2(total) - acc / total
    return h if h > 0.0 else 0.0


class EntropyTrie:
    """Árvore de prefixos (direta ou invertida) sobre o vocabulário

    Cada nó guarda quantas entradas passam por ele (peso por tipo ou por
    token), quantas terminam nele e a entropia da próxima transição.
    """

    def __init__(self, direction=FORWARD, end_of_word=True):
        if direction not in (FORWARD, REVERSED):
            raise ValueError(f'direção desconhecida: {direction}')
        self.direction = direction
        self.end_of_word = end_of_word
        self.root = Node()
        self.node_count = 1

    def _key(self, word):
        return word[::-1] if self.direction == REVERSED else word

    def add(self, word, weight=1):
        """Insere uma palavra (na orientação da árvore)"""
        node = self.root
        node.count += weight
        for ch in self._key(word):
            if ch not in node.children:
                self.node_count += 1
            node = node.child(ch)
            node.count += weight
        node.terminal += weight

    def finalize(self):
        """Calcula a entropia de todos os nós (passagem de agregação)"""
        stack = [self.root]
        while stack:
            node = stack.pop()
            node.entropy = categorical_entropy(node.outcomes(self.end_of_word))
            stack.extend(node.children.values())
        return self

    def find(self, key):
        node = self.root
        for ch in key:
            node = node.children.get(ch)
            if node is None:
                raise UnknownPrefixError(key)
        return node

    def node(self, text):
        """Nó de um prefixo (ou sufixo, na árvore invertida) da palavra"""
        return self.find(self._key(text))

    def count(self, text):
        """f(text): entradas que começam (ou terminam) com text; 0 se ausente"""
        try:
            return self.node(text).count
        except UnknownPrefixError:
            return 0

    def entropy(self, text):
        return self.node(text).entropy

    def profile(self, word):
        """Entropias H(m_0) .. H(m_|w|) ao longo da palavra

        Para a árvore invertida, m_i é o sufixo de comprimento i.
        """
        node = self.root
        values = [node.entropy]
        for ch in self._key(word):
            node = node.children.get(ch)
            if node is None:
                raise UnknownPrefixError(word)
            values.append(node.entropy)
        return values

    def probabilities(self, text):
        """Distribuição P(m + c | m) sobre os desfechos habilitados"""
        node = self.node(text)
        items = [(ch, c.count) for ch, c in node.children.items()]
        if self.end_of_word and node.terminal:
            items.append(('', node.terminal))
        total = sum(c for _, c in items)
        return {ch: c / total for ch, c in items} if total else {}

    def iter_nodes(self):
        """Gera (chave, contagem, entropia) em ordem lexicográfica"""
        stack = [('', self.root)]
        while stack:
            key, node = stack.pop()
            yield key, node.count, node.entropy
            for ch in sorted(node.children, reverse=True):
                stack.append((key + ch, node.children[ch]))


def build_trie(vocabulary, direction=FORWARD, end_of_word=True, token_weighted=False):
    """Constrói e finaliza a árvore de prefixos do vocabulário

    Args:
        vocabulary: Vocabulary não vazio
        direction: 'forward' ou 'reversed'
        end_of_word: conta o fim de palavra como desfecho da transição
        token_weighted: pesa cada palavra pela frequência de tokens

    Returns:
        EntropyTrie: árvore com contagens e entropias
    """
    if len(vocabulary) == 0:
        raise ValueError('vocabulário vazio')
    trie = EntropyTrie(direction=direction, end_of_word=end_of_word)
    for word, count in vocabulary:
        trie.add(word, count if token_weighted else 1)
    trie.finalize()
    logger.debug(f"Árvore {direction}: {trie.node_count} nós")
    return trie


def transition_entropy(trie, prefix):
    """Entropia de transição (bits) após o prefixo

    Na árvore invertida, prefix é um sufixo escrito na ordem normal.

    Raises:
        UnknownPrefixError: se o prefixo não ocorre na árvore
    """
    return trie.entropy(prefix)
