//! Exhaustive alignment oracle and corpus mutations.

#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use zhgec::align::substitution_cost;
use zhgec::model::CostConfig;
use zhgec::Providers;

/// Includes homophones and look-alikes so discounted substitutions occur.
pub const ALPHABET: [&str; 12] = ["一", "以", "衣", "西", "四", "是", "时", "的", "地", "得", "我", "猫"];

pub const SENTENCES: [&str; 12] = [
    "我一前没住过五星级旅馆，所以我很惊讶了。",
    "她有两个姐姐、一个妹妹和西个哥哥。",
    "可是后来，他们再三来镇上，西瓜往往第一个卖完。",
    "中央政法委书记罗干同志对因公殉职的公安干警及家属表示崇高的敬意并致以亲切的慰问。",
    "例如：青少年吸烟的害处不仅是他本身还会对社会的未来发展。",
    "1973年亲属们一知道我母亲生了一个女孩时，邻居们份份的来看父亲。",
    "我只可以是坐飞机去的，因为巴西离英国到远极了。",
    "上周五，我就在学校用刀切破了同学的手，原因全怪我毛手毛脚。",
    "不断提升城市功能，完善城市品质，优化人居环境。",
    "另外，冬阴功对外国人的喜爱不断地增加。",
    "我在家里一个人学习中文。",
    "近两年来，他发表了多篇高质量的学术论文。",
];

/// Minimal script cost by plain recursion over every step sequence.
pub fn exhaustive(s: &[&str], t: &[&str], cfg: &CostConfig, p: &Providers) -> f64 {
    if s.is_empty() {
        return t.len() as f64 * cfg.insert_cost;
    }
    if t.is_empty() {
        return s.len() as f64 * cfg.delete_cost;
    }
    let mut best = cfg.delete_cost + exhaustive(&s[1..], t, cfg, p);
    best = best.min(cfg.insert_cost + exhaustive(s, &t[1..], cfg, p));
    let step = if s[0] == t[0] { 0.0 } else { substitution_cost(s[0], t[0], cfg, p) };
    best = best.min(step + exhaustive(&s[1..], &t[1..], cfg, p));
    if s.len() >= 2 && t.len() >= 2 && s[0] == t[1] && s[1] == t[0] && s[0] != s[1] {
        best = best.min(cfg.transpose_cost + exhaustive(&s[2..], &t[2..], cfg, p));
    }
    best
}

/// One random change: insert, delete, substitute, swap neighbours or move a block.
pub fn mutate(rng: &mut ChaCha8Rng, chars: &mut Vec<char>) {
    let pool: Vec<char> = "的地得了是在一以西四我们他有不".chars().collect();
    let n = chars.len();
    match rng.gen_range(0..5) {
        0 => chars.insert(rng.gen_range(0..=n), pool[rng.gen_range(0..pool.len())]),
        1 if n > 1 => {
            chars.remove(rng.gen_range(0..n));
        }
        2 if n > 0 => chars[rng.gen_range(0..n)] = pool[rng.gen_range(0..pool.len())],
        3 if n > 1 => {
            let i = rng.gen_range(0..n - 1);
            chars.swap(i, i + 1);
        }
        _ if n > 3 => {
            let a = rng.gen_range(0..n - 1);
            let b = rng.gen_range(a + 1..=n.min(a + 4));
            let block: Vec<char> = chars.drain(a..b).collect();
            let at = rng.gen_range(0..=chars.len());
            chars.splice(at..at, block);
        }
        _ => chars.push(pool[rng.gen_range(0..pool.len())]),
    }
}
